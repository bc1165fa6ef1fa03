#include "axiscat/forward.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "axiscat/quadrature.hpp"
#include "axiscat/special_functions.hpp"

namespace axiscat {

namespace {
constexpr double kLayerScale = 1.0 / (4.0 * kPi);

cplx ipow(int m) {
    switch (((m % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}
}  // namespace

void IncidentWave::validate() const {
    double n = std::sqrt(direction[0] * direction[0] +
                         direction[1] * direction[1] +
                         direction[2] * direction[2]);
    if (std::abs(n - 1.0) > 1e-12)
        throw SolverError("IncidentWave: direction must be a unit vector");
    if (!(k > 0.0)) throw SolverError("IncidentWave: k must be > 0");
}

double IncidentWave::azimuth() const {
    return std::atan2(direction[1], direction[0]);
}

double IncidentWave::transverse() const {
    return std::hypot(direction[0], direction[1]);
}

IncidentModes incident_modes(const IncidentWave& wave,
                             const DiscretizedCurve& disc, int m_max) {
    wave.validate();
    const double s = wave.transverse();
    const double d3 = wave.direction[2];
    const double phi = wave.azimuth();
    const std::size_t n = disc.size();
    IncidentModes out;
    out.m_max = m_max;
    out.phi_d = phi;
    out.values.resize(n, m_max + 1);
    std::vector<double> jm(m_max + 1);
    for (std::size_t i = 0; i < n; ++i) {
        bessel_j_sequence(m_max, wave.k * disc.r[i] * s, jm.data());
        const cplx axial = std::exp(kImag * (wave.k * d3 * disc.z[i]));
        for (int m = 0; m <= m_max; ++m) {
            const cplx phase = std::exp(kImag * (-m * phi));
            out.values(i, m) = ipow(m) * jm[m] * phase * axial;
        }
    }
    return out;
}

IncidentModes incident_flux_rhs(const IncidentWave& wave,
                                const DiscretizedCurve& disc, int m_max) {
    wave.validate();
    const double s = wave.transverse();
    const double d3 = wave.direction[2];
    const double phi = wave.azimuth();
    const double k = wave.k;
    const std::size_t n = disc.size();
    IncidentModes out;
    out.m_max = m_max;
    out.phi_d = phi;
    out.values.resize(n, m_max + 1);
    std::vector<double> jm(m_max + 2);
    for (std::size_t i = 0; i < n; ++i) {
        bessel_j_sequence(m_max + 1, k * disc.r[i] * s, jm.data());
        const cplx axial = std::exp(kImag * (k * d3 * disc.z[i]));
        for (int m = 0; m <= m_max; ++m) {
            const double jprime =
                (m == 0) ? -jm[1] : 0.5 * (jm[m - 1] - jm[m + 1]);
            const cplx phase = std::exp(kImag * (-m * phi));
            const cplx um = ipow(m) * jm[m] * phase * axial;
            const cplx dr_um = ipow(m) * k * s * jprime * phase * axial;
            // [du/dnu + ik u]_m with nu.grad = nu_r d/dr + nu_z d/dz
            out.values(i, m) = disc.nr[i] * dr_um +
                               kImag * k * (disc.nz[i] * d3 + 1.0) * um;
        }
    }
    return out;
}

int mode_truncation(double k, const DiscretizedCurve& disc, double tol) {
    if (!(tol > 0.0 && tol < 1.0))
        throw SolverError("mode_truncation: tol must be in (0,1)");
    const double x = k * disc.max_radius();
    const int hi =
        std::max(8, static_cast<int>(x + 16.0 * std::cbrt(x + 1.0) + 60.0));
    std::vector<double> jm(hi + 1);
    bessel_j_sequence(hi, x, jm.data());
    for (int m = 4; m + 2 <= hi; ++m) {
        if (std::abs(jm[m]) < tol && std::abs(jm[m + 1]) < tol &&
            std::abs(jm[m + 2]) < tol)
            return m;
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

namespace {

// Subintervals of [a,b] refined dyadically toward each focus.
struct Focus {
    double t;
    int depth;
};

void graded_mesh(double a, double b, const std::vector<Focus>& foci,
                 std::vector<double>& pts) {
    pts.clear();
    pts.push_back(a);
    pts.push_back(b);
    const double len = b - a;
    for (const auto& f : foci) {
        // Distance below which refinement stops: half the gap when the focus
        // lies outside the interval.
        double gap = 0.0;
        if (f.t < a) gap = a - f.t;
        if (f.t > b) gap = f.t - b;
        double scale = len;
        for (int j = 1; j <= f.depth; ++j) {
            scale *= 0.5;
            if (scale < 0.45 * gap) break;
            for (double side : {-1.0, 1.0}) {
                double p = f.t + side * scale;
                if (p > a + 1e-300 && p < b - 1e-300) pts.push_back(p);
            }
        }
        if (f.t > a && f.t < b) pts.push_back(f.t);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double x, double y) {
                              return std::abs(x - y) < 1e-16 * len;
                          }),
              pts.end());
}

struct NearWorkspace {
    KernelWorkspace kw;
    std::vector<double> mesh;
    std::vector<cplx> ker;      // 3*(M+1) kernel values at one point
    std::vector<cplx> accS, accD, accA;  // (M+1) x 16 accumulators
    std::vector<double> momS, momD, momA;  // 16 log moments per kernel
};

struct TargetGeom {
    double t, r, z, nr, nz;
    int panel;
};

// Log-singularity strengths of the three kernels at source parameter t
// (target at i). Derived from the Legendre-Q asymptotics of the static
// modal kernels; m- and k-independent.
struct Strengths {
    double sS, sD, sA;
};

Strengths log_strengths(const TargetGeom& tg, const CurvePoint& src) {
    const double sq = std::sqrt(std::max(tg.r * src.r, 1e-300));
    Strengths s;
    s.sS = -2.0 / sq;
    s.sD = src.nr / (src.r * sq);
    s.sA = tg.nr / (tg.r * sq);
    return s;
}

}  // namespace

void assemble_all_modes(cplx k, const DiscretizedCurve& disc, int m_max,
                        double quad_tol, std::vector<Eigen::MatrixXcd>* bie,
                        std::vector<Eigen::MatrixXcd>* flux) {
    const std::size_t n = disc.size();
    const int M = m_max;
    const int npan = static_cast<int>(disc.panels.size());
    const bool want_flux = flux != nullptr;
    if (bie) {
        bie->assign(M + 1, Eigen::MatrixXcd::Zero(n, n));
    }
    if (want_flux) flux->assign(M + 1, Eigen::MatrixXcd::Zero(n, n));

    std::atomic<bool> quad_failed{false};

    parallel_for(0, n, [&](std::size_t i) {
        NearWorkspace ws;
        std::vector<cplx> kS(M + 1), kD(M + 1), kA(M + 1);
        double lag[16];
        TargetGeom tg{disc.t[i], disc.r[i], disc.z[i],
                      disc.nr[i], disc.nz[i], disc.panel_of[i]};
        const BandLimitedRadialCurve& curve = disc.source_curve;

        for (int p = 0; p < npan; ++p) {
            const Panel& pan = disc.panels[p];
            const bool near = std::abs(p - tg.panel) <= 1;
            if (!near) {
                for (int q = 0; q < 16; ++q) {
                    const std::size_t j = std::size_t(16) * p + q;
                    PairGeometry g;
                    g.r = tg.r;
                    g.z = tg.z;
                    g.rp = disc.r[j];
                    g.zp = disc.z[j];
                    g.nrp = disc.nr[j];
                    g.nzp = disc.nz[j];
                    g.nr = tg.nr;
                    g.nz = tg.nz;
                    KernelRequest req;
                    req.m_max = M;
                    req.want_adjoint = want_flux;
                    req.tol = quad_tol;
                    req.separation_ratio = g.min_rho() / pan.arclength;
                    bool ok = eval_modal_kernels(g, k, req, ws.kw, kS.data(),
                                                 kD.data(),
                                                 want_flux ? kA.data() : nullptr);
                    if (!ok) quad_failed.store(true);
                    const double wgt = disc.wt[j] * disc.jac[j] * disc.r[j];
                    for (int m = 0; m <= M; ++m) {
                        if (bie)
                            (*bie)[m](i, j) +=
                                kLayerScale * wgt * (kD[m] + kImag * k * kS[m]);
                        if (want_flux)
                            (*flux)[m](i, j) +=
                                kLayerScale * wgt * (kA[m] + kImag * k * kS[m]);
                    }
                }
                continue;
            }

            // Near panel: product integration with log-model subtraction.
            const double a = pan.t0, b = pan.t1;
            const bool pole_panel = (p == 0) || (p == npan - 1);
            const double pole_end = (p == 0) ? 0.0 : 1.0;
            const bool pole_mode = tg.r < 0.3 * pan.arclength;

            ws.accS.assign(std::size_t(M + 1) * 16, cplx(0, 0));
            ws.accD.assign(std::size_t(M + 1) * 16, cplx(0, 0));
            if (want_flux) ws.accA.assign(std::size_t(M + 1) * 16, cplx(0, 0));
            ws.momS.assign(16, 0.0);
            ws.momD.assign(16, 0.0);
            ws.momA.assign(16, 0.0);

            const int shallow_depth = pole_mode ? 30 : 8;
            std::vector<Focus> foci{{tg.t, shallow_depth}};
            if (pole_panel) foci.push_back({pole_end, 12});
            graded_mesh(a, b, foci, ws.mesh);

            const double total_w = b - a;
            for (std::size_t iv = 0; iv + 1 < ws.mesh.size(); ++iv) {
                const double ta = ws.mesh[iv], tb = ws.mesh[iv + 1];
                const double hh = 0.5 * (tb - ta), mm = 0.5 * (ta + tb);
                for (int q = 0; q < 16; ++q) {
                    const double tq = mm + hh * quad::gl16_x[q];
                    const double wq = hh * quad::gl16_w[q];
                    const CurvePoint cp = eval_curve_frame(curve, tq);
                    PairGeometry g;
                    g.r = tg.r;
                    g.z = tg.z;
                    g.rp = cp.r;
                    g.zp = cp.z;
                    g.nrp = cp.nr;
                    g.nzp = cp.nz;
                    g.nr = tg.nr;
                    g.nz = tg.nz;
                    KernelRequest req;
                    req.m_max = M;
                    req.want_adjoint = want_flux;
                    // Points with small quadrature weight tolerate a looser
                    // kernel tolerance; total contribution stays bounded.
                    double relax = std::min(100.0, total_w / (64.0 * wq));
                    req.tol = quad_tol * std::max(1.0, relax);
                    req.separation_ratio = 0.0;  // force the adaptive path
                    bool ok =
                        eval_modal_kernels(g, k, req, ws.kw, kS.data(), kD.data(),
                                           want_flux ? kA.data() : nullptr);
                    if (!ok) quad_failed.store(true);
                    quad::gl16_lagrange(a, b, tq, lag);
                    const double gw = cp.r * cp.jacobian * wq;
                    double logt = 0.0;
                    Strengths st{0, 0, 0};
                    if (!pole_mode) {
                        logt = std::log(std::abs(tq - tg.t));
                        st = log_strengths(tg, cp);
                    }
                    for (int m = 0; m <= M; ++m) {
                        const cplx vS = kS[m] - st.sS * logt;
                        const cplx vD = kD[m] - st.sD * logt;
                        cplx* aS = ws.accS.data() + std::size_t(m) * 16;
                        cplx* aD = ws.accD.data() + std::size_t(m) * 16;
                        for (int jb = 0; jb < 16; ++jb) {
                            const double lw = lag[jb] * gw;
                            aS[jb] += vS * lw;
                            aD[jb] += vD * lw;
                        }
                        if (want_flux) {
                            const cplx vA = kA[m] - st.sA * logt;
                            cplx* aA = ws.accA.data() + std::size_t(m) * 16;
                            for (int jb = 0; jb < 16; ++jb)
                                aA[jb] += vA * lag[jb] * gw;
                        }
                    }
                    if (!pole_mode) {
                        // Log moments (mode independent, added back below).
                        for (int jb = 0; jb < 16; ++jb) {
                            const double lw = lag[jb] * gw * logt;
                            ws.momS[jb] += st.sS * lw;
                            ws.momD[jb] += st.sD * lw;
                            if (want_flux) ws.momA[jb] += st.sA * lw;
                        }
                    }
                }
            }

            // Deep pass for the log moments only (cheap scalar integrand).
            if (!pole_mode) {
                std::vector<Focus> deep_foci{{tg.t, 30}};
                if (pole_panel) deep_foci.push_back({pole_end, 14});
                graded_mesh(a, b, deep_foci, ws.mesh);
                std::vector<double> dmomS(16, 0.0), dmomD(16, 0.0), dmomA(16, 0.0);
                for (std::size_t iv = 0; iv + 1 < ws.mesh.size(); ++iv) {
                    const double ta = ws.mesh[iv], tb = ws.mesh[iv + 1];
                    const double hh = 0.5 * (tb - ta), mm = 0.5 * (ta + tb);
                    for (int q = 0; q < 16; ++q) {
                        const double tq = mm + hh * quad::gl16_x[q];
                        const double wq = hh * quad::gl16_w[q];
                        const CurvePoint cp = eval_curve_frame(curve, tq);
                        const double logt = std::log(std::abs(tq - tg.t));
                        const Strengths st = log_strengths(tg, cp);
                        quad::gl16_lagrange(a, b, tq, lag);
                        const double gw = cp.r * cp.jacobian * wq * logt;
                        for (int jb = 0; jb < 16; ++jb) {
                            const double lw = lag[jb] * gw;
                            dmomS[jb] += st.sS * lw;
                            dmomD[jb] += st.sD * lw;
                            if (want_flux) dmomA[jb] += st.sA * lw;
                        }
                    }
                }
                // acc holds K - s*log on the shallow mesh plus the shallow
                // moment; replace the shallow moment by the deep one.
                for (int jb = 0; jb < 16; ++jb) {
                    dmomS[jb] -= ws.momS[jb];
                    dmomD[jb] -= ws.momD[jb];
                    dmomA[jb] -= ws.momA[jb];
                }
                for (int m = 0; m <= M; ++m) {
                    cplx* aS = ws.accS.data() + std::size_t(m) * 16;
                    cplx* aD = ws.accD.data() + std::size_t(m) * 16;
                    cplx* aA = ws.accA.data() + std::size_t(m) * 16;
                    for (int jb = 0; jb < 16; ++jb) {
                        aS[jb] += ws.momS[jb] + dmomS[jb];
                        aD[jb] += ws.momD[jb] + dmomD[jb];
                        if (want_flux) aA[jb] += ws.momA[jb] + dmomA[jb];
                    }
                }
            }

            for (int m = 0; m <= M; ++m) {
                const cplx* aS = ws.accS.data() + std::size_t(m) * 16;
                const cplx* aD = ws.accD.data() + std::size_t(m) * 16;
                const cplx* aA = ws.accA.data() + std::size_t(m) * 16;
                for (int jb = 0; jb < 16; ++jb) {
                    const std::size_t j = std::size_t(16) * p + jb;
                    if (bie)
                        (*bie)[m](i, j) +=
                            kLayerScale * (aD[jb] + kImag * k * aS[jb]);
                    if (want_flux)
                        (*flux)[m](i, j) +=
                            kLayerScale * (aA[jb] + kImag * k * aS[jb]);
                }
            }
        }

        for (int m = 0; m <= M; ++m) {
            if (bie) (*bie)[m](i, i) += 0.5;
            if (want_flux) (*flux)[m](i, i) += 0.5;
        }
    });

    if (quad_failed.load())
        throw SolverError(
            "assembly: adaptive singular quadrature failed to converge");
}

ModalLinearSystem assemble_modal_system(int m, cplx k,
                                        const DiscretizedCurve& disc) {
    m = std::abs(m);  // kernel evenness: the -m system equals the +m system
    std::vector<Eigen::MatrixXcd> bie;
    assemble_all_modes(k, disc, m, 1e-12, &bie, nullptr);
    ModalLinearSystem sys;
    sys.mode = m;
    sys.matrix = std::move(bie[m]);
    sys.lu.compute(sys.matrix);
    return sys;
}

// ---------------------------------------------------------------------------
// ModalSolver
// ---------------------------------------------------------------------------

ModalSolver::ModalSolver(const BandLimitedRadialCurve& curve, double k,
                         SolverOptions opt)
    : curve_(curve), k_(k), opt_(opt) {
    DiscretizationOptions dopt;
    dopt.points_per_wavelength = opt.ppw;
    dopt.max_panels = opt.max_panels;
    dopt.min_panels = opt.min_panels;
    disc_ = build_panels(curve, k, opt.ppw, dopt);
    m_max_ = (opt.m_max_override >= 0)
                 ? opt.m_max_override
                 : mode_truncation(k, disc_, opt.mode_tol);
    assemble_all_modes(cplx(k, 0.0), disc_, m_max_, opt.quad_tol, &bie_,
                       opt.with_flux ? &flux_ : nullptr);
    bie_lu_.resize(m_max_ + 1);
    if (opt.with_flux) flux_lu_.resize(m_max_ + 1);
    parallel_for(0, std::size_t(m_max_) + 1, [&](std::size_t m) {
        bie_lu_[m].compute(bie_[m]);
        if (opt_.with_flux) flux_lu_[m].compute(flux_[m]);
    });
}

double ModalSolver::bie_rcond(int m) const { return bie_lu_[m].rcond(); }

std::vector<Eigen::VectorXcd> ModalSolver::solve_bie(
    const std::vector<Eigen::VectorXcd>& rhs) const {
    std::vector<Eigen::VectorXcd> out(rhs.size());
    for (std::size_t m = 0; m < rhs.size(); ++m) out[m] = bie_lu_[m].solve(rhs[m]);
    return out;
}

ModalDensitySet ModalSolver::solve_wave(const IncidentWave& wave) const {
    IncidentModes inc = incident_modes(wave, disc_, m_max_);
    ModalDensitySet dens;
    dens.k = k_;
    dens.phi_d = inc.phi_d;
    dens.m_max = m_max_;
    dens.modes.resize(m_max_ + 1);
    for (int m = 0; m <= m_max_; ++m)
        dens.modes[m] = bie_lu_[m].solve((-inc.values.col(m)).eval());
    return dens;
}

ModalDensitySet ModalSolver::solve_dirichlet(
    const std::vector<Eigen::VectorXcd>& g, double phi_d) const {
    ModalDensitySet dens;
    dens.k = k_;
    dens.phi_d = phi_d;
    dens.m_max = m_max_;
    dens.modes.resize(m_max_ + 1);
    for (int m = 0; m <= m_max_; ++m) dens.modes[m] = bie_lu_[m].solve(g[m]);
    return dens;
}

std::vector<Eigen::VectorXcd> ModalSolver::solve_flux(
    const IncidentWave& wave) const {
    if (!opt_.with_flux)
        throw SolverError("ModalSolver: flux systems were not assembled");
    IncidentModes rhs = incident_flux_rhs(wave, disc_, m_max_);
    std::vector<Eigen::VectorXcd> psi(m_max_ + 1);
    for (int m = 0; m <= m_max_; ++m)
        psi[m] = flux_lu_[m].solve(rhs.values.col(m).eval());
    return psi;
}

std::vector<ModalDensitySet> solve_modes(double k, const DiscretizedCurve& disc,
                                         const std::vector<IncidentWave>& waves,
                                         int m_max) {
    for (const auto& w : waves)
        if (std::abs(w.k - k) > 1e-12 * std::max(1.0, k))
            throw SolverError("solve_modes: all waves must share wavenumber k");
    std::vector<Eigen::MatrixXcd> bie;
    assemble_all_modes(cplx(k, 0.0), disc, m_max, 1e-12, &bie, nullptr);
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu(m_max + 1);
    parallel_for(0, std::size_t(m_max) + 1,
                 [&](std::size_t m) { lu[m].compute(bie[m]); });
    std::vector<ModalDensitySet> out(waves.size());
    for (std::size_t w = 0; w < waves.size(); ++w) {
        IncidentModes inc = incident_modes(waves[w], disc, m_max);
        out[w].k = k;
        out[w].phi_d = inc.phi_d;
        out[w].m_max = m_max;
        out[w].modes.resize(m_max + 1);
        for (int m = 0; m <= m_max; ++m)
            out[w].modes[m] = lu[m].solve((-inc.values.col(m)).eval());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Field evaluation
// ---------------------------------------------------------------------------

EvalKernels build_eval_kernels(const DiscretizedCurve& disc, double k,
                               const std::vector<Vec3>& points, int m_max,
                               bool check_distance) {
    const std::size_t n = disc.size();
    const std::size_t npts = points.size();
    EvalKernels ek;
    ek.theta.resize(npts);
    ek.per_mode.assign(m_max + 1, Eigen::MatrixXcd(npts, n));
    const double near_limit = disc.max_panel_arclength();
    std::vector<double> rx(npts), zx(npts);
    for (std::size_t p = 0; p < npts; ++p) {
        rx[p] = std::hypot(points[p][0], points[p][1]);
        zx[p] = points[p][2];
        ek.theta[p] = std::atan2(points[p][1], points[p][0]);
        if (check_distance) {
            double dmin = 1e300;
            for (std::size_t j = 0; j < n; ++j)
                dmin = std::min(dmin, std::hypot(rx[p] - disc.r[j],
                                                 zx[p] - disc.z[j]));
            if (dmin <= near_limit)
                throw SolverError(
                    "eval_scattered: point too close to the surface "
                    "(near-surface evaluation unsupported)");
        }
    }
    parallel_for(0, npts, [&](std::size_t p) {
        KernelWorkspace kw;
        std::vector<cplx> kS(m_max + 1), kD(m_max + 1);
        for (std::size_t j = 0; j < n; ++j) {
            PairGeometry g;
            g.r = rx[p];
            g.z = zx[p];
            g.rp = disc.r[j];
            g.zp = disc.z[j];
            g.nrp = disc.nr[j];
            g.nzp = disc.nz[j];
            KernelRequest req;
            req.m_max = m_max;
            req.tol = 1e-12;
            req.separation_ratio =
                g.min_rho() / disc.panels[disc.panel_of[j]].arclength;
            eval_modal_kernels(g, cplx(k, 0.0), req, kw, kS.data(), kD.data(),
                               nullptr);
            const double wgt = disc.wt[j] * disc.jac[j] * disc.r[j];
            for (int m = 0; m <= m_max; ++m)
                ek.per_mode[m](p, j) =
                    kLayerScale * wgt * (kD[m] + kImag * k * kS[m]);
        }
    });
    return ek;
}

Eigen::VectorXcd eval_with_kernels(const EvalKernels& ek,
                                   const ModalDensitySet& dens) {
    const std::size_t npts = ek.theta.size();
    if (static_cast<int>(ek.per_mode.size()) < dens.m_max + 1)
        throw SolverError("eval_with_kernels: kernel table has too few modes");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(npts);
    for (int m = 0; m <= dens.m_max; ++m) {
        Eigen::VectorXcd base = ek.per_mode[m] * dens.modes[m];
        for (std::size_t p = 0; p < npts; ++p) {
            cplx cm;
            if (m == 0)
                cm = cplx(1, 0);
            else
                cm = std::exp(kImag * (m * ek.theta[p])) +
                     std::exp(kImag * (m * (2.0 * dens.phi_d - ek.theta[p])));
            out[p] += cm * base[p];
        }
    }
    return out;
}

Eigen::VectorXcd eval_scattered(const ModalDensitySet& dens,
                                const DiscretizedCurve& disc, double k,
                                const std::vector<Vec3>& points) {
    EvalKernels ek = build_eval_kernels(disc, k, points, dens.m_max, true);
    return eval_with_kernels(ek, dens);
}

namespace {

// One panel's contribution to the layer potentials at a possibly-near target,
// by bisection until each piece is short relative to its distance.
void refined_panel_integral(const DiscretizedCurve& disc, int p, double ta,
                            double tb, const ModalDensitySet& dens, cplx k,
                            double rx, double zx, KernelWorkspace& kw,
                            std::vector<cplx>& kS, std::vector<cplx>& kD,
                            std::vector<cplx>& acc, int depth) {
    const Panel& pan = disc.panels[p];
    const BandLimitedRadialCurve& curve = disc.source_curve;
    const int M = dens.m_max;
    // distance from target to the piece (coarse probe at 3 points)
    double dmin = 1e300;
    for (double s : {0.0, 0.5, 1.0}) {
        double t = ta + s * (tb - ta);
        CurvePoint cp = eval_curve_frame(curve, t);
        dmin = std::min(dmin, std::hypot(rx - cp.r, zx - cp.z));
    }
    const double piece_len = (tb - ta) / (pan.t1 - pan.t0) * pan.arclength;
    if (piece_len > 0.7 * dmin && depth < 40) {
        const double tm = 0.5 * (ta + tb);
        refined_panel_integral(disc, p, ta, tm, dens, k, rx, zx, kw, kS, kD,
                               acc, depth + 1);
        refined_panel_integral(disc, p, tm, tb, dens, k, rx, zx, kw, kS, kD,
                               acc, depth + 1);
        return;
    }
    const double hh = 0.5 * (tb - ta), mm = 0.5 * (ta + tb);
    for (int q = 0; q < 16; ++q) {
        const double tq = mm + hh * quad::gl16_x[q];
        const double wq = hh * quad::gl16_w[q];
        const CurvePoint cp = eval_curve_frame(curve, tq);
        double lag[16];
        quad::gl16_lagrange(pan.t0, pan.t1, tq, lag);
        PairGeometry g;
        g.r = rx;
        g.z = zx;
        g.rp = cp.r;
        g.zp = cp.z;
        g.nrp = cp.nr;
        g.nzp = cp.nz;
        KernelRequest req;
        req.m_max = M;
        req.tol = 1e-12;
        req.separation_ratio = g.min_rho() / piece_len;
        eval_modal_kernels(g, k, req, kw, kS.data(), kD.data(), nullptr);
        const double gw = cp.r * cp.jacobian * wq;
        for (int m = 0; m <= M; ++m) {
            // interpolated density at tq
            cplx mu(0, 0);
            for (int jb = 0; jb < 16; ++jb)
                mu += lag[jb] * dens.modes[m][std::size_t(16) * p + jb];
            acc[m] += gw * mu * (kD[m] + k * kImag * kS[m]);
        }
    }
}

}  // namespace

Eigen::VectorXcd eval_scattered_refined(const ModalDensitySet& dens,
                                        const DiscretizedCurve& disc, double k,
                                        const std::vector<Vec3>& pts) {
    const int M = dens.m_max;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(pts.size());
    parallel_for(0, pts.size(), [&](std::size_t ip) {
        KernelWorkspace kw;
        std::vector<cplx> kS(M + 1), kD(M + 1);
        std::vector<cplx> acc(M + 1, cplx(0, 0));
        const double rx = std::hypot(pts[ip][0], pts[ip][1]);
        const double zx = pts[ip][2];
        const double theta = std::atan2(pts[ip][1], pts[ip][0]);
        for (int p = 0; p < static_cast<int>(disc.panels.size()); ++p)
            refined_panel_integral(disc, p, disc.panels[p].t0, disc.panels[p].t1,
                                   dens, cplx(k, 0.0), rx, zx, kw, kS, kD, acc,
                                   0);
        cplx u(0, 0);
        for (int m = 0; m <= M; ++m) {
            cplx cm = (m == 0) ? cplx(1, 0)
                               : std::exp(kImag * (m * theta)) +
                                     std::exp(kImag * (m * (2.0 * dens.phi_d -
                                                            theta)));
            u += cm * kLayerScale * acc[m];
        }
        out[ip] = u;
    });
    return out;
}

MeasurementSet forward_operator(const BandLimitedRadialCurve& curve,
                                const AxisFrame& frame, double k,
                                const std::vector<IncidentWave>& waves,
                                const std::vector<Vec3>& receptors,
                                SolverOptions opt) {
    ModalSolver solver(curve, k, opt);
    std::vector<Vec3> body_pts(receptors.size());
    for (std::size_t i = 0; i < receptors.size(); ++i)
        body_pts[i] = world_to_axis_frame(receptors[i], frame);
    MeasurementSet ms;
    ms.receptors = receptors;
    EvalKernels ek =
        build_eval_kernels(solver.disc(), k, body_pts, solver.m_max());
    for (const auto& w : waves) {
        IncidentWave bw = w;
        bw.direction = world_dir_to_axis_frame(w.direction, frame);
        ModalDensitySet dens = solver.solve_wave(bw);
        Eigen::VectorXcd vals = eval_with_kernels(ek, dens);
        const cplx phase = std::exp(
            kImag * (k * (w.direction[0] * frame.center_x +
                          w.direction[1] * frame.center_y)));
        MeasurementSet::Entry e;
        e.k = k;
        e.direction = w.direction;
        e.values = phase * vals;
        ms.entries.push_back(std::move(e));
    }
    return ms;
}

const MeasurementSet::Entry* MeasurementSet::find(double k, const Vec3& d,
                                                  double tol) const {
    for (const auto& e : entries) {
        if (std::abs(e.k - k) <= tol &&
            std::abs(e.direction[0] - d[0]) <= tol &&
            std::abs(e.direction[1] - d[1]) <= tol &&
            std::abs(e.direction[2] - d[2]) <= tol)
            return &e;
    }
    return nullptr;
}

}  // namespace axiscat
