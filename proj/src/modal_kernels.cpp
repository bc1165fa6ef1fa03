#include "axiscat/modal_kernels.hpp"

#include <cmath>

#include "axiscat/quadrature.hpp"

namespace axiscat {

double PairGeometry::min_rho() const {
    return std::hypot(r - rp, z - zp);
}

namespace {

constexpr double kAxisEps = 1e-14;

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Kernel integrand values at azimuth tau (both layers plus adjoint).
struct BaseVals {
    cplx fS, fD, fA;
};

inline BaseVals base_kernels(const PairGeometry& g, cplx k, double cost,
                             double rho2) {
    const double rho = std::sqrt(rho2);
    const cplx ikr = k * cplx(0, 1) * rho;
    const cplx e = std::exp(ikr);
    BaseVals b;
    b.fS = e / rho;
    const cplx fac = (ikr - 1.0) * e / (rho2 * rho);
    // nu(y).(y-x) and nu(x).(x-y)
    const double nu_src = g.nrp * (g.rp - g.r * cost) + g.nzp * (g.zp - g.z);
    const double nu_tgt = g.nr * (g.r - g.rp * cost) + g.nz * (g.z - g.zp);
    b.fD = fac * nu_src;
    b.fA = fac * nu_tgt;
    return b;
}

// On-axis rings: rho is independent of tau, so only the m = 0 (and, through
// the cos(tau) factors in the normal terms, |m| = 1) projections survive.
void eval_on_axis(const PairGeometry& g, cplx k, int m_max, bool adj,
                  cplx* single, cplx* dbl_src, cplx* dbl_tgt) {
    const double rho = g.min_rho();
    const double rho2 = rho * rho;
    const cplx ikr = k * cplx(0, 1) * rho;
    const cplx e = std::exp(ikr);
    const cplx gS = e / rho;
    const cplx fac = (ikr - 1.0) * e / (rho2 * rho);
    // integrands: gS * 1, fac * (A + B cos tau): int e^{-im tau} picks
    // 2 pi A delta_{m0} + pi B delta_{|m|1}.
    const double As = g.nrp * g.rp + g.nzp * (g.zp - g.z);
    const double Bs = -g.nrp * g.r;
    const double At = g.nr * g.r + g.nz * (g.z - g.zp);
    const double Bt = -g.nr * g.rp;
    for (int m = 0; m <= m_max; ++m) {
        single[m] = (m == 0) ? 2.0 * kPi * gS : cplx(0, 0);
        cplx d = (m == 0) ? 2.0 * kPi * fac * As
                          : (m == 1 ? kPi * fac * Bs : cplx(0, 0));
        dbl_src[m] = d;
        if (adj)
            dbl_tgt[m] = (m == 0) ? 2.0 * kPi * fac * At
                                  : (m == 1 ? kPi * fac * Bt : cplx(0, 0));
    }
}

}  // namespace

bool eval_modal_kernels(const PairGeometry& g, cplx k, const KernelRequest& req,
                        KernelWorkspace& ws, cplx* single, cplx* dbl_src,
                        cplx* dbl_tgt) {
    const double d = g.min_rho();
    if (d < 1e-14)
        throw SolverError("modal kernels: coincident target and source points");
    const int M = req.m_max;
    const bool adj = req.want_adjoint && dbl_tgt != nullptr;

    if (g.r < kAxisEps || g.rp < kAxisEps) {
        eval_on_axis(g, k, M, adj, single, dbl_src, dbl_tgt);
        return true;
    }

    const double rr = g.r * g.rp;
    const double sq = std::sqrt(rr);
    const double ak = std::abs(k);

    if (req.separation_ratio >= req.trapezoid_threshold) {
        // Equispaced trapezoid over the full period + FFT: spectrally accurate
        // for this periodic analytic integrand. Sample count covers the mode
        // band, the oscillation k*sqrt(r r'), and the analyticity strip
        // 2*asinh(d / 2 sqrt(r r')).
        const double strip = 2.0 * std::asinh(d / (2.0 * sq));
        const double need =
            std::max({2.0 * (M + 8.0), M + ak * sq + 30.0 / strip + 16.0, 64.0});
        const int n = next_pow2(static_cast<int>(std::ceil(need)));
        ws.samples.resize(3 * n);
        cplx* sS = ws.samples.data();
        cplx* sD = sS + n;
        cplx* sA = sD + n;
        const double d2 = d * d;
        for (int j = 0; j < n; ++j) {
            const double tau = 2.0 * kPi * j / n;
            const double cost = std::cos(tau);
            const double rho2 = d2 + 2.0 * rr * (1.0 - cost);
            BaseVals b = base_kernels(g, k, cost, rho2);
            sS[j] = b.fS;
            sD[j] = b.fD;
            sA[j] = adj ? b.fA : cplx(0, 0);
        }
        quad::fft_inplace(sS, n);
        quad::fft_inplace(sD, n);
        if (adj) quad::fft_inplace(sA, n);
        const double w = 2.0 * kPi / n;
        for (int m = 0; m <= M; ++m) {
            single[m] = w * sS[m];
            dbl_src[m] = w * sD[m];
            if (adj) dbl_tgt[m] = w * sA[m];
        }
        return true;
    }

    // Adaptive Gauss-Kronrod on [0, pi] (even integrands), batched over modes.
    const int nk = adj ? 3 : 2;
    const int dim = nk * (M + 1);
    ws.acc.assign(dim, cplx(0, 0));
    ws.scales.resize(dim);
    const double scale_S = 2.0 * kPi / d;
    const double scale_D = 2.0 * kPi * (1.0 + ak * d) / (d * d);
    for (int m = 0; m <= M; ++m) {
        ws.scales[m] = scale_S;
        ws.scales[M + 1 + m] = scale_D;
        if (adj) ws.scales[2 * (M + 1) + m] = scale_D;
    }
    const double d2 = d * d;
    auto f = [&](double tau, cplx* out) {
        const double cost = std::cos(tau);
        const double rho2 = d2 + 2.0 * rr * (1.0 - cost);
        BaseVals b = base_kernels(g, k, cost, rho2);
        // cos(m tau) by recurrence
        double cm1 = 1.0, cm0 = cost;
        out[0] = b.fS;
        out[M + 1] = b.fD;
        if (adj) out[2 * (M + 1)] = b.fA;
        for (int m = 1; m <= M; ++m) {
            double c = (m == 1) ? cost : 2.0 * cost * cm0 - cm1;
            if (m > 1) {
                cm1 = cm0;
                cm0 = c;
            }
            out[m] = b.fS * c;
            out[M + 1 + m] = b.fD * c;
            if (adj) out[2 * (M + 1) + m] = b.fA * c;
        }
        return;
    };
    bool ok = quad::adaptive_gk15(f, 0.0, kPi, dim, req.tol, ws.scales.data(),
                                  req.max_depth, ws.acc.data(), ws.scratch);
    for (int m = 0; m <= M; ++m) {
        single[m] = 2.0 * ws.acc[m];
        dbl_src[m] = 2.0 * ws.acc[M + 1 + m];
        if (adj) dbl_tgt[m] = 2.0 * ws.acc[2 * (M + 1) + m];
    }
    return ok;
}

ModalKernelPair modal_green(const SourceTargetPair& pair, int m, cplx k) {
    if (!(k.real() > 0.0) || k.imag() < 0.0)
        throw SolverError("modal_green: require Re(k) > 0 and Im(k) >= 0");
    m = std::abs(m);  // evenness in m
    KernelWorkspace ws;
    std::vector<cplx> s(m + 1), ds(m + 1);
    KernelRequest req;
    req.m_max = m;
    req.tol = 1e-13;
    req.separation_ratio = 0.0;  // always the adaptive path for the scalar op
    eval_modal_kernels(pair.geom, k, req, ws, s.data(), ds.data(), nullptr);
    return {s[m], ds[m]};
}

std::vector<ModalKernelPair> modal_green_batch(const SourceTargetPair& pair,
                                               int m_max, cplx k) {
    KernelWorkspace ws;
    std::vector<cplx> s(m_max + 1), ds(m_max + 1);
    KernelRequest req;
    req.m_max = m_max;
    req.tol = 1e-13;
    req.separation_ratio = pair.separation_ratio();
    eval_modal_kernels(pair.geom, k, req, ws, s.data(), ds.data(), nullptr);
    std::vector<ModalKernelPair> out(m_max + 1);
    for (int m = 0; m <= m_max; ++m) out[m] = {s[m], ds[m]};
    return out;
}

}  // namespace axiscat
