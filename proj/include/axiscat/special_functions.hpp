#pragma once

#include "axiscat/common.hpp"

namespace axiscat {

/// Cylindrical Bessel J_m(x), m >= 0, x >= 0, by Miller's downward recurrence
/// with the J_0 + 2*sum J_2k = 1 normalization. Absolute error <~ 1e-14 for
/// x <= 200, m <= 200. Negative orders via J_{-m} = (-1)^m J_m.
double bessel_j(int m, double x);

/// J_m(z) for complex argument (same recurrence; used for complex wavenumbers).
cplx bessel_j(int m, cplx z);

/// Fills out[0..m_max] with J_m(x); one downward sweep.
void bessel_j_sequence(int m_max, double x, double* out);
void bessel_j_sequence(int m_max, cplx z, cplx* out);

/// Spherical Bessel j_l and outgoing Hankel h_l^{(1)}.
struct SphericalWave {
    double j;
    cplx h1;
};

/// j_l by downward recurrence, y_l (hence h_l) upward. Throws SolverError on
/// overflow of h_l.
SphericalWave spherical_wave_functions(int l, double x);

/// Fills j[0..l_max], h1[0..l_max] in one pass.
void spherical_wave_sequence(int l_max, double x, double* j, cplx* h1);

/// Legendre polynomial P_l(x), |x| <= 1.
double legendre_p(int l, double x);
void legendre_p_sequence(int l_max, double x, double* out);

/// Fully normalized associated Legendre \bar P_l^m (orthonormal over the
/// sphere including the exp(i m theta)/sqrt(2 pi) factor convention:
/// Y_lm = \bar P_l^m(cos phi) e^{i m theta}).  m >= 0; fills rows l = m..l_max.
void normalized_assoc_legendre(int l_max, int m, double x, double* out);

}  // namespace axiscat
