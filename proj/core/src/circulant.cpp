#include "specbill/circulant.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "specbill/circulant_exact.hpp"

namespace specbill {

namespace {

constexpr double kPi = std::numbers::pi;

void require_hyperbolic(const CirculantHessian& h) {
  if (h.r < 1) throw std::invalid_argument("r must be >= 1");
  if (!(h.c > 1.0)) throw NotHyperbolic("circulant parameter requires c > 1");
}

}  // namespace

std::vector<double> eigenvalues(const CirculantHessian& h) {
  require_hyperbolic(h);
  std::vector<double> lam(2 * h.r);
  for (int k = 0; k < 2 * h.r; ++k) lam[k] = 2.0 * h.c + 2.0 * std::cos(k * kPi / h.r);
  return lam;
}

std::vector<double> inverse_row(const CirculantHessian& h) {
  require_hyperbolic(h);
  int n = 2 * h.r;
  std::vector<double> lam = eigenvalues(h);
  std::vector<double> row(n);
  for (int q = 1; q <= n; ++q) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < n; ++k) {
      double ang = kPi * double(q - 1) * double(k) / double(h.r);
      acc += std::exp(std::complex<double>(0.0, ang)) / lam[k];
    }
    acc /= double(n);
    row[q - 1] = acc.real();  // imaginary parts cancel pairwise (< 1e-13)
  }
  return row;
}

double row_sum(const CirculantHessian& h) {
  require_hyperbolic(h);
  return 1.0 / (2.0 * h.c + 2.0);
}

double cube_sum_spectral(const CirculantHessian& h) {
  require_hyperbolic(h);
  int n = 2 * h.r;
  double sum = 0.0;
  for (int k1 = 0; k1 < n; ++k1) {
    double d1 = h.c + std::cos(k1 * kPi / h.r);
    for (int k2 = 0; k2 < n; ++k2) {
      double d2 = h.c + std::cos(k2 * kPi / h.r);
      double d3 = h.c + std::cos((k1 + k2) * kPi / h.r);
      sum += 1.0 / (d1 * d2 * d3);
    }
  }
  return sum / (32.0 * double(h.r) * double(h.r));
}

double cube_sum(const CirculantHessian& h) {
  std::vector<double> row = inverse_row(h);
  double direct = 0.0;
  for (double v : row) direct += v * v * v;
  double spectral = cube_sum_spectral(h);
  if (std::abs(direct - spectral) > 1e-10 * std::max(1.0, std::abs(direct)))
    throw SpectralMismatch("direct and spectral cube sums disagree");
  return direct;
}

Eigen::MatrixXd dense_matrix(const CirculantHessian& h) {
  require_hyperbolic(h);
  int n = 2 * h.r;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) += 2.0 * h.c;
    m(i, (i + 1) % n) += 1.0;
    m(i, (i + n - 1) % n) += 1.0;
  }
  return m;
}

Eigen::MatrixXd dense_inverse(const CirculantHessian& h) {
  Eigen::MatrixXd m = dense_matrix(h);
  return m.partialPivLu().inverse();
}

std::vector<Rational> exact_inverse_row(int r, const Rational& c) {
  int n = 2 * r;
  // Assemble the circulant and invert by Gauss-Jordan over exact rationals.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    a[i][i] += 2 * c;
    a[i][(i + 1) % n] += 1;
    a[i][(i + n - 1) % n] += 1;
    a[i][n + i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (a[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::invalid_argument("exact circulant is singular");
    std::swap(a[col], a[piv]);
    Rational p = a[col][col];
    for (int j = 0; j < 2 * n; ++j) a[col][j] /= p;
    for (int i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (int j = 0; j < 2 * n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<Rational> row(n);
  for (int q = 0; q < n; ++q) row[q] = a[0][n + q];
  return row;
}

Rational exact_row_sum(int r, const Rational& c) {
  Rational s(0);
  for (const Rational& v : exact_inverse_row(r, c)) s += v;
  return s;
}

Rational exact_cube_sum(int r, const Rational& c) {
  Rational s(0);
  for (const Rational& v : exact_inverse_row(r, c)) s += v * v * v;
  return s;
}

}  // namespace specbill
