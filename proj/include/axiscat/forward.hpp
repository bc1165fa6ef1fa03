#pragma once

#include <Eigen/Dense>

#include "axiscat/curve.hpp"
#include "axiscat/modal_kernels.hpp"

namespace axiscat {

struct IncidentWave {
    double k = 1.0;
    Vec3 direction{0, 0, 1};

    void validate() const;
    double azimuth() const;          // atan2(d2, d1)
    double transverse() const;       // sqrt(d1^2 + d2^2)
};

/// Azimuthal modes of a plane wave on the curve nodes:
///   u_m(r,z) = i^m J_m(k r s) e^{-i m phi_d} e^{i k d3 z},  m = 0..m_max,
/// with u_{-m} = e^{2 i m phi_d} u_m.
struct IncidentModes {
    int m_max = 0;
    double phi_d = 0;
    Eigen::MatrixXcd values;  // N x (m_max+1)
};

IncidentModes incident_modes(const IncidentWave& wave,
                             const DiscretizedCurve& disc, int m_max);

/// Modal right-hand sides for the flux equation:
///   (1/2 I + K' + ik S) psi = [d u^inc/d nu + ik u^inc]_m.
IncidentModes incident_flux_rhs(const IncidentWave& wave,
                                const DiscretizedCurve& disc, int m_max);

/// Smallest M >= 4 with |J_M(k r_max)| (and the next two orders) below tol.
int mode_truncation(double k, const DiscretizedCurve& disc, double tol);

/// One assembled and factorized modal Nystrom system
/// 1/2 I + (1/(4 pi))(D_m + ik S_m); right-hand sides follow rhs = -u_m^inc.
struct ModalLinearSystem {
    int mode = 0;
    Eigen::MatrixXcd matrix;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    const char* rhs_convention = "rhs = -u_inc_m";
};

ModalLinearSystem assemble_modal_system(int m, cplx k,
                                        const DiscretizedCurve& disc);

/// Per-mode densities of one axisymmetric exterior field. Only m >= 0 is
/// stored; logical mode -m is e^{2 i m phi_d} times mode m.
struct ModalDensitySet {
    double k = 0;
    double phi_d = 0;
    int m_max = 0;
    std::vector<Eigen::VectorXcd> modes;  // m = 0..m_max, length N each
};

/// Receptor positions with measured complex values, one entry per (k, d).
struct MeasurementSet {
    std::vector<Vec3> receptors;
    struct Entry {
        double k = 0;
        Vec3 direction{0, 0, 1};
        Eigen::VectorXcd values;
    };
    std::vector<Entry> entries;
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    bool noisy = false;

    const Entry* find(double k, const Vec3& d, double tol = 1e-9) const;
};

struct SolverOptions {
    double ppw = 12.0;
    int min_panels = 1;
    int max_panels = 4096;
    double mode_tol = 1e-12;     // incident-mode truncation tolerance
    int m_max_override = -1;     // >= 0 forces the mode count
    double quad_tol = 1e-12;     // singular-quadrature target
    bool with_flux = false;      // also factor the flux (K') systems
};

/// Assembles, factors and solves the per-mode systems for one curve at one
/// wavenumber; retains the factorizations so extra right-hand sides (flux
/// data, Frechet boundary data) reuse them.
class ModalSolver {
public:
    ModalSolver(const BandLimitedRadialCurve& curve, double k,
                SolverOptions opt = {});

    const DiscretizedCurve& disc() const { return disc_; }
    const BandLimitedRadialCurve& curve() const { return curve_; }
    double k() const { return k_; }
    int m_max() const { return m_max_; }

    /// Solves (1/2 I + D + ikS) mu_m = rhs_m for all modes.
    std::vector<Eigen::VectorXcd> solve_bie(
        const std::vector<Eigen::VectorXcd>& rhs) const;

    /// Scattering densities for a body-frame incident wave: rhs = -u_m^inc.
    ModalDensitySet solve_wave(const IncidentWave& wave) const;

    /// Exterior Dirichlet problem with boundary values g (nodal modes).
    ModalDensitySet solve_dirichlet(const std::vector<Eigen::VectorXcd>& g,
                                    double phi_d) const;

    /// Total-field normal derivative psi_m on the nodes for a wave
    /// (combined flux equation; requires with_flux).
    std::vector<Eigen::VectorXcd> solve_flux(const IncidentWave& wave) const;

    const Eigen::MatrixXcd& bie_matrix(int m) const { return bie_[m]; }
    double bie_rcond(int m) const;

private:
    BandLimitedRadialCurve curve_;
    double k_;
    SolverOptions opt_;
    DiscretizedCurve disc_;
    int m_max_;
    std::vector<Eigen::MatrixXcd> bie_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> bie_lu_;
    std::vector<Eigen::MatrixXcd> flux_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> flux_lu_;
};

/// Assembles all modes 0..m_max at once (shared kernel sweeps).
/// flux != nullptr also assembles 1/2 I + (1/(4 pi))(K' + ik S).
void assemble_all_modes(cplx k, const DiscretizedCurve& disc, int m_max,
                        double quad_tol, std::vector<Eigen::MatrixXcd>* bie,
                        std::vector<Eigen::MatrixXcd>* flux);

/// Per-wave solves sharing one factorization per mode.
std::vector<ModalDensitySet> solve_modes(double k, const DiscretizedCurve& disc,
                                         const std::vector<IncidentWave>& waves,
                                         int m_max);

/// Evaluation kernels at external points, reusable across densities.
struct EvalKernels {
    std::vector<double> theta;                 // azimuth per point
    std::vector<Eigen::MatrixXcd> per_mode;    // (npts x N) per mode
};

EvalKernels build_eval_kernels(const DiscretizedCurve& disc, double k,
                               const std::vector<Vec3>& points, int m_max,
                               bool check_distance = true);

Eigen::VectorXcd eval_with_kernels(const EvalKernels& ek,
                                   const ModalDensitySet& dens);

/// u^scat at exterior points (distance > one panel arclength from the surface).
Eigen::VectorXcd eval_scattered(const ModalDensitySet& dens,
                                const DiscretizedCurve& disc, double k,
                                const std::vector<Vec3>& points);

/// Same field via panel-refined quadrature with interpolated densities; valid
/// close to the surface (used by boundary-condition checks).
Eigen::VectorXcd eval_scattered_refined(const ModalDensitySet& dens,
                                        const DiscretizedCurve& disc, double k,
                                        const std::vector<Vec3>& pts);

/// Full forward operator F_{k,d}: world-frame receptors and directions, body
/// frame solve, phase transport e^{ik d.c}.
MeasurementSet forward_operator(const BandLimitedRadialCurve& curve,
                                const AxisFrame& frame, double k,
                                const std::vector<IncidentWave>& waves,
                                const std::vector<Vec3>& receptors,
                                SolverOptions opt = {});

}  // namespace axiscat
