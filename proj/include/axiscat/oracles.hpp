#pragma once

#include <Eigen/Dense>

#include "axiscat/curve.hpp"
#include "axiscat/modal_kernels.hpp"

namespace axiscat {

/// Separation-of-variables solution for the sound-soft sphere:
///   u^scat(x) = sum_l c_l h_l^{(1)}(k|x|) P_l(cos gamma),
///   c_l = -(2l+1) i^l j_l(ka) / h_l^{(1)}(ka).
struct SphereSeriesSolution {
    double k = 1.0;
    double radius = 1.0;
    int truncation = 0;
    std::vector<cplx> coeffs;

    static SphereSeriesSolution make(double k, double radius,
                                     int truncation = -1);
};

/// Scattered field at exterior points; throws inside the sphere.
Eigen::VectorXcd sphere_scattered_field(const SphereSeriesSolution& sol,
                                        const Vec3& d,
                                        const std::vector<Vec3>& points);

/// Far-field pattern of the same solution:
///   u_inf(xhat) = -(1/(ik)) sum_l (2l+1) (j_l(ka)/h_l(ka)) P_l(cos gamma).
cplx sphere_farfield(const SphereSeriesSolution& sol, const Vec3& d,
                     const Vec3& xhat);

/// Brute-force globally adaptive quadrature of the defining azimuthal
/// integrals (independent of the fast kernel path; test use only).
ModalKernelPair modal_green_bruteforce(const SourceTargetPair& pair, int m,
                                       cplx k, double tol = 1e-12);

/// Central finite differences of the forward operator over the coefficient
/// basis directions; columns ordered (c0, c1..cNp, s1..sNp).
Eigen::MatrixXcd finite_difference_jacobian(
    const BandLimitedRadialCurve& curve, const AxisFrame& frame, double k,
    const std::vector<struct IncidentWave>& waves,
    const std::vector<Vec3>& receptors, int n_p, double step);

/// File-backed cache for oracle results, keyed by a content hash of the
/// inputs. Directory from AXISCAT_CACHE or ".axiscat_cache".
class OracleCache {
public:
    OracleCache();
    explicit OracleCache(std::string dir);

    bool load(const std::string& key, std::vector<cplx>& values) const;
    void store(const std::string& key, const std::vector<cplx>& values) const;
    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
};

}  // namespace axiscat
