#pragma once

#include <complex>

#include "specbill/errors.hpp"

namespace specbill {

using Complex = std::complex<double>;

// H^(1)_nu(z) for nu in {0, 1} and |arg z| < pi: ascending series for
// |z| <= 12, asymptotic expansion with adaptive truncation beyond. The
// crossover is continuous to ~1e-11 on the |z| = 12 ring (upper half-plane).
// Raises OriginSingularity at z = 0.
Complex hankel1(int order, Complex z);

// Branches exposed for crossover diagnostics and the CLI self-test.
Complex hankel1_series(int order, Complex z);
Complex hankel1_asymptotic(int order, Complex z);

// Ascending-series J_nu and Y_nu (nu in {0, 1}); independent oracle pieces.
Complex bessel_j_series(int order, Complex z);
Complex bessel_y_series(int order, Complex z);

// J_1 valid for any |z| (series below the crossover, Hankel average above);
// the logarithmic-splitting quadrature needs it at large real argument.
Complex bessel_j1(Complex z);

inline double hankel_crossover_radius() { return 12.0; }

}  // namespace specbill
