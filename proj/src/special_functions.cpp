#include "axiscat/special_functions.hpp"

#include <cmath>
#include <limits>

namespace axiscat {

namespace {

// Start order for the downward Bessel recurrence. The margin above the
// turning point must grow like x^(1/3) with a constant large enough that the
// Airy-regime decay exp(-0.94 (dm)^{3/2} / sqrt(x)) reaches ~1e-17.
int miller_start(int m, double ax) {
    int nx = static_cast<int>(ax);
    int start =
        std::max(m, nx) + 25 + static_cast<int>(12.5 * std::cbrt(ax + 1.0));
    return start + (start % 2);  // even, so the normalization sum ends cleanly
}

template <typename T>
void bessel_j_seq_impl(int m_max, T z, T* out) {
    double az = std::abs(z);
    if (az == 0.0) {
        out[0] = T(1);
        for (int m = 1; m <= m_max; ++m) out[m] = T(0);
        return;
    }
    const int start = miller_start(m_max, az);
    // Downward recurrence J_{m-1} = (2m/z) J_m - J_{m+1} with rescaling.
    T jp = T(0), jc = T(1e-290);
    T norm = T(0);  // accumulates J_0 + 2 sum_{k>=1} J_{2k}
    for (int m = start; m >= 1; --m) {
        T jm = (T(2.0 * m) / z) * jc - jp;
        jp = jc;
        jc = jm;
        if (m - 1 <= m_max) out[m - 1] = jc;
        if ((m - 1) % 2 == 0) norm += (m - 1 == 0) ? jc : T(2) * jc;
        double mag = std::abs(jc);
        if (mag > 1e250) {
            T s = T(1e-250);
            jc *= s;
            jp *= s;
            norm *= s;
            for (int q = std::min(m - 1, m_max); q >= 0; --q) out[q] *= s;
        }
    }
    for (int m = 0; m <= m_max; ++m) out[m] /= norm;
    // Entries above `start` were never written; recurrence always covers m_max.
}

}  // namespace

void bessel_j_sequence(int m_max, double x, double* out) {
    bessel_j_seq_impl(m_max, x, out);
}

void bessel_j_sequence(int m_max, cplx z, cplx* out) {
    bessel_j_seq_impl(m_max, z, out);
}

double bessel_j(int m, double x) {
    bool flip = false;
    if (m < 0) {
        m = -m;
        flip = (m % 2) != 0;
    }
    std::vector<double> buf(m + 1);
    bessel_j_sequence(m, x, buf.data());
    return flip ? -buf[m] : buf[m];
}

cplx bessel_j(int m, cplx z) {
    bool flip = false;
    if (m < 0) {
        m = -m;
        flip = (m % 2) != 0;
    }
    std::vector<cplx> buf(m + 1);
    bessel_j_sequence(m, z, buf.data());
    return flip ? -buf[m] : buf[m];
}

void spherical_wave_sequence(int l_max, double x, double* j, cplx* h1) {
    if (x <= 0.0) throw SolverError("spherical_wave_functions: x must be > 0");
    // j_l: downward recurrence normalized by j_0 = sin x / x.
    {
        const int start = miller_start(l_max, x) + 2;
        double jp = 0.0, jc = 1e-290;
        std::vector<double> tmp(l_max + 1, 0.0);
        for (int l = start; l >= 1; --l) {
            double jm = (2.0 * l + 1.0) / x * jc - jp;
            jp = jc;
            jc = jm;
            if (l - 1 <= l_max) tmp[l - 1] = jc;
            if (std::abs(jc) > 1e250) {
                jc *= 1e-250;
                jp *= 1e-250;
                for (int q = std::min(l - 1, l_max); q >= 0; --q) tmp[q] *= 1e-250;
            }
        }
        double j0 = std::sin(x) / x;
        double scale = j0 / tmp[0];
        for (int l = 0; l <= l_max; ++l) j[l] = tmp[l] * scale;
    }
    // y_l: upward recurrence (dominant solution, stable).
    double y0 = -std::cos(x) / x;
    double y1 = -std::cos(x) / (x * x) - std::sin(x) / x;
    h1[0] = cplx(j[0], y0);
    if (l_max >= 1) h1[1] = cplx(j[1], y1);
    double ym = y0, yc = y1;
    for (int l = 2; l <= l_max; ++l) {
        double yn = (2.0 * l - 1.0) / x * yc - ym;
        ym = yc;
        yc = yn;
        if (!std::isfinite(yn))
            throw SolverError("spherical_wave_functions: h_l overflow at l=" +
                              std::to_string(l));
        h1[l] = cplx(j[l], yc);
    }
    if (!std::isfinite(std::abs(h1[l_max])))
        throw SolverError("spherical_wave_functions: h_l overflow");
}

SphericalWave spherical_wave_functions(int l, double x) {
    std::vector<double> j(l + 1);
    std::vector<cplx> h(l + 1);
    spherical_wave_sequence(l, x, j.data(), h.data());
    return {j[l], h[l]};
}

double legendre_p(int l, double x) {
    double pm = 1.0, pc = x;
    if (l == 0) return 1.0;
    if (l == 1) return x;
    for (int n = 2; n <= l; ++n) {
        double pn = ((2.0 * n - 1.0) * x * pc - (n - 1.0) * pm) / n;
        pm = pc;
        pc = pn;
    }
    return pc;
}

void legendre_p_sequence(int l_max, double x, double* out) {
    out[0] = 1.0;
    if (l_max >= 1) out[1] = x;
    for (int n = 2; n <= l_max; ++n)
        out[n] = ((2.0 * n - 1.0) * x * out[n - 1] - (n - 1.0) * out[n - 2]) / n;
}

void normalized_assoc_legendre(int l_max, int m, double x, double* out) {
    // out[l - m] = \bar P_l^m(x) for l = m..l_max, with
    // \bar P_l^m = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) P_l^m.
    double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    // Seed: \bar P_m^m = (-1)^m sqrt((2m+1)/(4pi) (2m-1)!!/(2m)!!) sx^m
    double pmm = std::sqrt(1.0 / (4.0 * kPi));
    for (int k = 1; k <= m; ++k)
        pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sx;
    out[0] = pmm;
    if (l_max == m) return;
    double pm1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
    out[1] = pm1;
    double pll_2 = pmm, pll_1 = pm1;
    for (int l = m + 2; l <= l_max; ++l) {
        double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) /
                             (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        double pll = a * (x * pll_1 - b * pll_2);
        out[l - m] = pll;
        pll_2 = pll_1;
        pll_1 = pll;
    }
}

}  // namespace axiscat
