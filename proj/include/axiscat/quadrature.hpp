#pragma once

#include "axiscat/common.hpp"

namespace axiscat::quad {

// Gauss-Legendre rules on [-1,1], nodes ascending.
extern const double gl16_x[16];
extern const double gl16_w[16];
extern const double gl8_x[8];
extern const double gl8_w[8];

// Barycentric weights for interpolation from the 16 GL nodes.
extern const double gl16_bary[16];

// Gauss(7)-Kronrod(15) pair, nodes ascending; wg is zero on Kronrod-only nodes.
extern const double gk15_x[15];
extern const double gk15_wk[15];
extern const double gk15_wg[15];

/// Lagrange basis values L_j(t) for the 16 GL nodes mapped to [a,b].
void gl16_lagrange(double a, double b, double t, double* L);

/// In-place complex radix-2 FFT, X_k = sum_j x_j e^{-2pi i jk/n}; n power of 2.
void fft_inplace(cplx* x, int n);

/// Adaptive vector-valued Gauss-Kronrod integration of f over [a,b].
/// f(t, out) writes `dim` complex values. Accumulates the integral into acc.
/// Splits until the K15-G7 discrepancy, measured per component relative to
/// scales[q] (or 1 when scales is null), is below the interval's share of
/// abs_tol, or max_depth is reached. Returns false if any interval hit
/// max_depth unconverged.
template <class F>
bool adaptive_gk15(F&& f, double a, double b, int dim, double abs_tol,
                   const double* scales, int max_depth, cplx* acc,
                   std::vector<cplx>& scratch) {
    struct Interval {
        double a, b, tol;
        int depth;
    };
    bool converged = true;
    std::vector<Interval> stack;
    stack.push_back({a, b, abs_tol, 0});
    scratch.resize(3 * dim);
    cplx* fval = scratch.data();
    cplx* kro = scratch.data() + dim;
    cplx* gau = scratch.data() + 2 * dim;
    while (!stack.empty()) {
        Interval iv = stack.back();
        stack.pop_back();
        const double c = 0.5 * (iv.a + iv.b), h = 0.5 * (iv.b - iv.a);
        for (int q = 0; q < dim; ++q) kro[q] = gau[q] = cplx(0, 0);
        for (int n = 0; n < 15; ++n) {
            f(c + h * gk15_x[n], fval);
            for (int q = 0; q < dim; ++q) {
                kro[q] += gk15_wk[n] * fval[q];
                if (gk15_wg[n] != 0.0) gau[q] += gk15_wg[n] * fval[q];
            }
        }
        double err = 0.0;
        for (int q = 0; q < dim; ++q) {
            double e = std::abs(kro[q] - gau[q]);
            if (scales) e /= scales[q];
            err = std::max(err, e);
        }
        err *= h;
        if (err <= iv.tol || iv.depth >= max_depth) {
            if (err > iv.tol) converged = false;
            for (int q = 0; q < dim; ++q) acc[q] += h * kro[q];
        } else {
            stack.push_back({iv.a, c, 0.5 * iv.tol, iv.depth + 1});
            stack.push_back({c, iv.b, 0.5 * iv.tol, iv.depth + 1});
        }
    }
    return converged;
}

}  // namespace axiscat::quad
