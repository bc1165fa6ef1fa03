#include "axiscat/quadrature.hpp"

#include <cmath>

namespace axiscat::quad {

const double gl16_x[16] = {
    -0.9894009349916499325961542, -0.9445750230732325760779884,
    -0.8656312023878317438804679, -0.7554044083550030338951012,
    -0.6178762444026437484466718, -0.4580167776572273863424194,
    -0.2816035507792589132304605, -0.0950125098376374401853193,
    0.0950125098376374401853193,  0.2816035507792589132304605,
    0.4580167776572273863424194,  0.6178762444026437484466718,
    0.7554044083550030338951012,  0.8656312023878317438804679,
    0.9445750230732325760779884,  0.9894009349916499325961542};
const double gl16_w[16] = {
    0.0271524594117540948517806, 0.0622535239386478928628438,
    0.0951585116824927848099251, 0.1246289712555338720524763,
    0.1495959888165767320815017, 0.1691565193950025381893121,
    0.1826034150449235888667637, 0.1894506104550684962853967,
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};
const double gl8_x[8] = {
    -0.9602898564975362316835609, -0.7966664774136267395915539,
    -0.5255324099163289858177390, -0.1834346424956498049394761,
    0.1834346424956498049394761,  0.5255324099163289858177390,
    0.7966664774136267395915539,  0.9602898564975362316835609};
const double gl8_w[8] = {
    0.1012285362903762591525314, 0.2223810344533744705443560,
    0.3137066458778872873379622, 0.3626837833783619829651504,
    0.3626837833783619829651504, 0.3137066458778872873379622,
    0.2223810344533744705443560, 0.1012285362903762591525314};

const double gk15_x[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
const double gk15_wk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
const double gk15_wg[15] = {
    0.0, 0.129484966168869693270611432679082,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082,
    0.0};

// Barycentric weights 1/prod(x_j - x_i) for the GL16 nodes, scaled to max 1.
const double gl16_bary[16] = {
    -5.52230883061771880e-02, 1.89046329417823743e-01,
    -3.56456962010318614e-01, 5.33879908447938178e-01,
    -7.01868593331003724e-01, 8.43800385559108289e-01,
    -9.46312451267470103e-01, 1.00000000000000000e+00,
    -1.00000000000000000e+00, 9.46312451267470104e-01,
    -8.43800385559108289e-01, 7.01868593331003724e-01,
    -5.33879908447938178e-01, 3.56456962010318614e-01,
    -1.89046329417823743e-01, 5.52230883061771880e-02};

void gl16_lagrange(double a, double b, double t, double* L) {
    // Map t to the reference interval, then barycentric form.
    double u = (2.0 * t - a - b) / (b - a);
    double num[16];
    double denom = 0.0;
    for (int j = 0; j < 16; ++j) {
        double d = u - gl16_x[j];
        if (std::abs(d) < 1e-15) {
            for (int q = 0; q < 16; ++q) L[q] = (q == j) ? 1.0 : 0.0;
            return;
        }
        num[j] = gl16_bary[j] / d;
        denom += num[j];
    }
    for (int j = 0; j < 16; ++j) L[j] = num[j] / denom;
}

void fft_inplace(cplx* x, int n) {
    // Bit reversal permutation.
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * kPi / len;
        cplx wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (int q = 0; q < len / 2; ++q) {
                cplx u = x[i + q];
                cplx v = x[i + q + len / 2] * w;
                x[i + q] = u + v;
                x[i + q + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace axiscat::quad
