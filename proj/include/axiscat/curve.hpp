#pragma once

#include <array>

#include "axiscat/common.hpp"

namespace axiscat {

/// Truncated Fourier radial profile p(t) on [0,1]:
///   p(t) = p0 + sum_j pc_j cos(2 pi j (t-0.5)) + ps_j sin(2 pi j (t-0.5)),
/// generating the curve gamma(t) = p(t) (cos(pi(t-0.5)), sin(pi(t-0.5))).
struct BandLimitedRadialCurve {
    double p0 = 1.0;
    std::vector<double> cos_coeffs;  // pc_1..pc_Np
    std::vector<double> sin_coeffs;  // ps_1..ps_Np
    int band_limit = 0;

    BandLimitedRadialCurve() = default;
    BandLimitedRadialCurve(double p0_, std::vector<double> pc,
                           std::vector<double> ps);

    /// Rejects profiles that are not strictly positive on 1024 uniform samples.
    void validate() const;
    bool is_positive() const;

    double max_radius() const;  // max of p over the sample grid
};

double eval_radial(const BandLimitedRadialCurve& c, double t);
double eval_radial_derivative(const BandLimitedRadialCurve& c, double t);

/// Point on the generating curve with its differential frame.
/// normal is the outward unit normal (pointing away from the axis for p == 1);
/// jacobian = |gamma'(t)|.
struct CurvePoint {
    double r = 0, z = 0;
    double dr_dt = 0, dz_dt = 0;
    double nr = 0, nz = 0;
    double jacobian = 0;
};

CurvePoint eval_curve_frame(const BandLimitedRadialCurve& c, double t);

struct Panel {
    double t0 = 0, t1 = 0;
    std::array<double, 16> t{};
    std::array<CurvePoint, 16> point{};
    std::array<double, 16> weight{};  // GL weight scaled by (t1-t0)/2
    double arclength = 0;
};

struct DiscretizationOptions {
    double points_per_wavelength = 12.0;
    int max_panels = 4096;
    int min_panels = 1;
};

/// Panelized quadrature discretization: 16 Gauss-Legendre nodes per panel,
/// panels split dyadically in t until each arclength <= (2 pi/k)(16/ppw).
struct DiscretizedCurve {
    std::vector<Panel> panels;
    double wavenumber_hint = 0;
    double points_per_wavelength = 12;
    BandLimitedRadialCurve source_curve;  // for off-node geometry

    // Flattened node arrays (panel-major, node order within panel preserved).
    std::vector<double> t, r, z, nr, nz, jac, wt;
    std::vector<int> panel_of;

    std::size_t size() const { return t.size(); }
    double total_arclength() const;
    double max_radius() const;
    double max_panel_arclength() const;
};

DiscretizedCurve build_panels(const BandLimitedRadialCurve& c, double k,
                              double ppw, DiscretizationOptions opt = {});

/// Pose of the symmetry axis: direction given by polar/azimuth angles, center
/// of the axis on the z=0 plane at (center_x, center_y).
struct AxisFrame {
    double polar = 0.0;    // theta_a in [0, pi]
    double azimuth = 0.0;  // phi_a in [0, 2 pi)
    double center_x = 0.0;
    double center_y = 0.0;

    std::array<double, 3> axis_direction() const;
};

using Vec3 = std::array<double, 3>;

/// Translates by -(h1,h2,0), then rotates so the frame axis maps onto +z.
/// Rotation is the transpose of Rz(azimuth) Ry(polar) (z-y-z convention).
Vec3 world_to_axis_frame(const Vec3& p, const AxisFrame& f);
Vec3 axis_frame_to_world(const Vec3& p, const AxisFrame& f);

/// Rotates a direction only (no translation).
Vec3 world_dir_to_axis_frame(const Vec3& d, const AxisFrame& f);
Vec3 axis_dir_to_world(const Vec3& d, const AxisFrame& f);

}  // namespace axiscat
