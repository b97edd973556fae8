#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specbill/errors.hpp"

namespace specbill {

// 2r x 2r circulant C(2c, 1, 0, ..., 0, 1) with c = cosh(alpha/2) > 1: the
// length-functional Hessian at the r-th iterate of the bouncing-ball orbit,
// up to the sign conjugation handled in the billiard module. For r = 1 the
// first row degenerates to (2c, 2) since the two off-diagonal slots coincide.
struct CirculantHessian {
  int r = 1;
  double c = 2.0;
};

// lambda_k = 2c + 2cos(k pi / r), k = 0..2r-1.
std::vector<double> eigenvalues(const CirculantHessian& h);

// First row of the inverse: h^{1q} = (1/2r) sum_k w^{(q-1)k} / lambda_k,
// w = exp(i pi / r). Imaginary parts cancel pairwise and are discarded.
std::vector<double> inverse_row(const CirculantHessian& h);

// sum_q h^{pq} = 1 / (2c + 2), the reciprocal of the k = 0 eigenvalue
// (constant eigenvector); independent of p.
double row_sum(const CirculantHessian& h);

// F_r = sum_q (h^{1q})^3, computed directly from inverse_row and cross-checked
// against the spectral double sum
//   (1/32r^2) sum_{k1,k2} 1/[(c+cos(k1 pi/r))(c+cos(k2 pi/r))(c+cos((k1+k2) pi/r))].
// Raises SpectralMismatch if the two disagree beyond 1e-10 * max(1, |F_r|).
double cube_sum(const CirculantHessian& h);

// Spectral form alone, exposed for the cross-check tests.
double cube_sum_spectral(const CirculantHessian& h);

Eigen::MatrixXd dense_matrix(const CirculantHessian& h);

// LU-based inverse of the explicit circulant; test oracle.
Eigen::MatrixXd dense_inverse(const CirculantHessian& h);

}  // namespace specbill
