#include "axiscat/curve.hpp"

#include <cmath>

#include "axiscat/quadrature.hpp"

namespace axiscat {

BandLimitedRadialCurve::BandLimitedRadialCurve(double p0_, std::vector<double> pc,
                                               std::vector<double> ps)
    : p0(p0_), cos_coeffs(std::move(pc)), sin_coeffs(std::move(ps)) {
    if (cos_coeffs.size() != sin_coeffs.size())
        throw SolverError("curve: cosine/sine coefficient lengths differ");
    band_limit = static_cast<int>(cos_coeffs.size());
}

double eval_radial(const BandLimitedRadialCurve& c, double t) {
    const double u = 2.0 * kPi * (t - 0.5);
    double p = c.p0;
    // cos/sin of j*u by recurrence
    double cj = 1.0, sj = 0.0;
    const double c1 = std::cos(u), s1 = std::sin(u);
    for (int j = 1; j <= c.band_limit; ++j) {
        double cn = cj * c1 - sj * s1;
        double sn = sj * c1 + cj * s1;
        cj = cn;
        sj = sn;
        p += c.cos_coeffs[j - 1] * cj + c.sin_coeffs[j - 1] * sj;
    }
    return p;
}

double eval_radial_derivative(const BandLimitedRadialCurve& c, double t) {
    const double u = 2.0 * kPi * (t - 0.5);
    double dp = 0.0;
    double cj = 1.0, sj = 0.0;
    const double c1 = std::cos(u), s1 = std::sin(u);
    for (int j = 1; j <= c.band_limit; ++j) {
        double cn = cj * c1 - sj * s1;
        double sn = sj * c1 + cj * s1;
        cj = cn;
        sj = sn;
        dp += 2.0 * kPi * j * (-c.cos_coeffs[j - 1] * sj + c.sin_coeffs[j - 1] * cj);
    }
    return dp;
}

bool BandLimitedRadialCurve::is_positive() const {
    for (int i = 0; i < 1024; ++i) {
        double t = (i + 0.5) / 1024.0;
        if (eval_radial(*this, t) <= 0.0) return false;
    }
    if (eval_radial(*this, 0.0) <= 0.0 || eval_radial(*this, 1.0) <= 0.0)
        return false;
    return true;
}

void BandLimitedRadialCurve::validate() const {
    if (static_cast<int>(cos_coeffs.size()) != band_limit ||
        static_cast<int>(sin_coeffs.size()) != band_limit)
        throw SolverError("curve: coefficient count does not match band limit");
    if (!is_positive())
        throw SolverError("curve: radial profile is not strictly positive");
}

double BandLimitedRadialCurve::max_radius() const {
    double m = 0.0;
    for (int i = 0; i <= 1024; ++i)
        m = std::max(m, eval_radial(*this, i / 1024.0));
    return m;
}

CurvePoint eval_curve_frame(const BandLimitedRadialCurve& c, double t) {
    // cos(pi(t-0.5)) == sin(pi t); evaluate via min(t, 1-t) so the endpoints
    // land on the axis (r = 0) exactly.
    const double u = std::min(t, 1.0 - t);
    const double ca = std::sin(kPi * u);
    const double sa = std::sin(kPi * (t - 0.5));
    const double p = eval_radial(c, t);
    const double dp = eval_radial_derivative(c, t);
    CurvePoint q;
    q.r = p * ca;
    q.z = p * sa;
    q.dr_dt = dp * ca - p * kPi * sa;
    q.dz_dt = dp * sa + p * kPi * ca;
    q.jacobian = std::hypot(q.dr_dt, q.dz_dt);
    if (q.jacobian < 1e-13)
        throw SolverError("eval_curve_frame: degenerate frame (|gamma'| < 1e-13)");
    // Outward normal: unit tangent rotated by -pi/2 in the (r,z) plane.
    q.nr = q.dz_dt / q.jacobian;
    q.nz = -q.dr_dt / q.jacobian;
    return q;
}

namespace {

double panel_arclength(const BandLimitedRadialCurve& c, double t0, double t1) {
    double len = 0.0;
    const double h = 0.5 * (t1 - t0), m = 0.5 * (t0 + t1);
    for (int i = 0; i < 16; ++i) {
        double t = m + h * quad::gl16_x[i];
        len += quad::gl16_w[i] * eval_curve_frame(c, t).jacobian;
    }
    return len * h;
}

}  // namespace

DiscretizedCurve build_panels(const BandLimitedRadialCurve& c, double k,
                              double ppw, DiscretizationOptions opt) {
    if (k <= 0.0) throw SolverError("build_panels: k must be > 0");
    c.validate();
    ppw = std::max(ppw, opt.points_per_wavelength);
    const double bound = (2.0 * kPi / k) * (16.0 / ppw);

    int n_panels = std::max(1, opt.min_panels);
    // round min_panels up to a power of two so intervals tile dyadically
    while (n_panels & (n_panels - 1)) ++n_panels;
    for (;;) {
        bool ok = true;
        for (int p = 0; p < n_panels && ok; ++p) {
            double t0 = double(p) / n_panels, t1 = double(p + 1) / n_panels;
            if (panel_arclength(c, t0, t1) > bound) ok = false;
        }
        if (ok) break;
        n_panels *= 2;
        if (n_panels > opt.max_panels)
            throw SolverError("build_panels: panel cap exceeded (" +
                              std::to_string(opt.max_panels) + ")");
    }

    DiscretizedCurve d;
    d.wavenumber_hint = k;
    d.points_per_wavelength = ppw;
    d.source_curve = c;
    d.panels.resize(n_panels);
    const std::size_t n = std::size_t(16) * n_panels;
    d.t.reserve(n);
    d.r.reserve(n);
    d.z.reserve(n);
    d.nr.reserve(n);
    d.nz.reserve(n);
    d.jac.reserve(n);
    d.wt.reserve(n);
    d.panel_of.reserve(n);
    for (int p = 0; p < n_panels; ++p) {
        Panel& pan = d.panels[p];
        pan.t0 = double(p) / n_panels;
        pan.t1 = double(p + 1) / n_panels;
        const double h = 0.5 * (pan.t1 - pan.t0), m = 0.5 * (pan.t0 + pan.t1);
        pan.arclength = 0.0;
        for (int i = 0; i < 16; ++i) {
            pan.t[i] = m + h * quad::gl16_x[i];
            pan.point[i] = eval_curve_frame(c, pan.t[i]);
            pan.weight[i] = quad::gl16_w[i] * h;
            pan.arclength += pan.weight[i] * pan.point[i].jacobian;
            d.t.push_back(pan.t[i]);
            d.r.push_back(pan.point[i].r);
            d.z.push_back(pan.point[i].z);
            d.nr.push_back(pan.point[i].nr);
            d.nz.push_back(pan.point[i].nz);
            d.jac.push_back(pan.point[i].jacobian);
            d.wt.push_back(pan.weight[i]);
            d.panel_of.push_back(p);
        }
    }
    return d;
}

double DiscretizedCurve::total_arclength() const {
    double s = 0.0;
    for (const auto& p : panels) s += p.arclength;
    return s;
}

double DiscretizedCurve::max_radius() const {
    double m = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) m = std::max(m, r[i]);
    return m;
}

double DiscretizedCurve::max_panel_arclength() const {
    double m = 0.0;
    for (const auto& p : panels) m = std::max(m, p.arclength);
    return m;
}

std::array<double, 3> AxisFrame::axis_direction() const {
    return {std::sin(polar) * std::cos(azimuth),
            std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

namespace {
// R = Rz(azimuth) Ry(polar): maps +z onto the axis direction.
void rotate_rzry(double polar, double azimuth, const Vec3& v, Vec3& out) {
    const double cp = std::cos(polar), sp = std::sin(polar);
    const double cz = std::cos(azimuth), sz = std::sin(azimuth);
    // Ry(polar)
    double x1 = cp * v[0] + sp * v[2];
    double y1 = v[1];
    double z1 = -sp * v[0] + cp * v[2];
    // Rz(azimuth)
    out[0] = cz * x1 - sz * y1;
    out[1] = sz * x1 + cz * y1;
    out[2] = z1;
}

void rotate_rzry_t(double polar, double azimuth, const Vec3& v, Vec3& out) {
    const double cp = std::cos(polar), sp = std::sin(polar);
    const double cz = std::cos(azimuth), sz = std::sin(azimuth);
    // Rz(-azimuth)
    double x1 = cz * v[0] + sz * v[1];
    double y1 = -sz * v[0] + cz * v[1];
    double z1 = v[2];
    // Ry(-polar)
    out[0] = cp * x1 - sp * z1;
    out[1] = y1;
    out[2] = sp * x1 + cp * z1;
}
}  // namespace

Vec3 world_to_axis_frame(const Vec3& p, const AxisFrame& f) {
    Vec3 shifted{p[0] - f.center_x, p[1] - f.center_y, p[2]};
    Vec3 out;
    rotate_rzry_t(f.polar, f.azimuth, shifted, out);
    return out;
}

Vec3 axis_frame_to_world(const Vec3& p, const AxisFrame& f) {
    Vec3 out;
    rotate_rzry(f.polar, f.azimuth, p, out);
    out[0] += f.center_x;
    out[1] += f.center_y;
    return out;
}

Vec3 world_dir_to_axis_frame(const Vec3& d, const AxisFrame& f) {
    Vec3 out;
    rotate_rzry_t(f.polar, f.azimuth, d, out);
    return out;
}

Vec3 axis_dir_to_world(const Vec3& d, const AxisFrame& f) {
    Vec3 out;
    rotate_rzry(f.polar, f.azimuth, d, out);
    return out;
}

}  // namespace axiscat
