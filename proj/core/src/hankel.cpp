#include "specbill/hankel.hpp"

#include <cmath>
#include <cstdlib>

namespace specbill {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kPi = 3.14159265358979323846264338;

// Ascending series, order 0.
//   J0 = sum (-1)^m (z^2/4)^m / (m!)^2
//   Y0 = (2/pi) [ (log(z/2) + gamma) J0 + sum_{m>=1} (-1)^{m+1} H_m (z^2/4)^m / (m!)^2 ]
void series0(Complex z, Complex& j0, Complex& y0) {
  const Complex q = z * z * 0.25;
  Complex term(1.0, 0.0);  // (-1)^m q^m / (m!)^2
  Complex js = term;
  Complex hs(0.0, 0.0);  // harmonic-weighted tail of Y0
  double harmonic = 0.0;
  for (int m = 1; m <= 200; ++m) {
    term *= -q / double(m * m);
    harmonic += 1.0 / double(m);
    js += term;
    hs += -term * harmonic;  // (-1)^{m+1} H_m q^m / (m!)^2
    if (std::abs(term) < 1e-18 * (std::abs(js) + 1e-300) && m > 4) break;
  }
  j0 = js;
  y0 = (2.0 / kPi) * ((std::log(z * 0.5) + kEulerGamma) * js + hs);
}

// Ascending series, order 1.
//   J1 = (z/2) sum (-1)^m (z^2/4)^m / (m! (m+1)!)
//   Y1 = -2/(pi z) + (2/pi)(log(z/2)+gamma) J1
//        - (z/(2 pi)) sum (-1)^m (H_m + H_{m+1}) (z^2/4)^m / (m! (m+1)!)
void series1(Complex z, Complex& j1, Complex& y1) {
  const Complex q = z * z * 0.25;
  Complex term(1.0, 0.0);  // (-1)^m q^m / (m! (m+1)!)
  Complex js = term;
  Complex hs = term * 1.0;  // (H_0 + H_1) = 1 at m = 0
  double hm = 0.0, hm1 = 1.0;
  for (int m = 1; m <= 200; ++m) {
    term *= -q / double(m * (m + 1));
    hm += 1.0 / double(m);
    hm1 += 1.0 / double(m + 1);
    js += term;
    hs += term * (hm + hm1);
    if (std::abs(term) < 1e-18 * (std::abs(js) + 1e-300) && m > 4) break;
  }
  j1 = 0.5 * z * js;
  y1 = -2.0 / (kPi * z) + (2.0 / kPi) * (std::log(z * 0.5) + kEulerGamma) * j1 -
       z / (2.0 * kPi) * hs;
}

// Optimally truncated asymptotic sum: sum_m i^m a_m(nu) / z^m with
// a_{m+1} = a_m (4 nu^2 - (2m+1)^2) / (8 (m+1)). Stops at the smallest term.
Complex asymptotic_sum(int nu, Complex z) {
  const Complex iz = Complex(0.0, 1.0) / z;
  Complex factor(1.0, 0.0);  // i^m a_m / z^m
  Complex sum = factor;
  double prev = 1e300;
  for (int m = 0; m < 30; ++m) {
    const double num = 4.0 * nu * nu - double(2 * m + 1) * double(2 * m + 1);
    factor *= iz * (num / (8.0 * double(m + 1)));
    const double mag = std::abs(factor);
    if (mag >= prev && m > 1) break;
    sum += factor;
    prev = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

Complex hankel1_series(int order, Complex z) {
  if (z == Complex(0.0, 0.0)) throw OriginSingularity("hankel1 at z = 0");
  Complex j, y;
  if (order == 0) {
    series0(z, j, y);
  } else if (order == 1) {
    series1(z, j, y);
  } else {
    throw std::invalid_argument("hankel1: order must be 0 or 1");
  }
  return j + Complex(0.0, 1.0) * y;
}

Complex hankel1_asymptotic(int order, Complex z) {
  if (z == Complex(0.0, 0.0)) throw OriginSingularity("hankel1 at z = 0");
  if (order != 0 && order != 1) throw std::invalid_argument("hankel1: order must be 0 or 1");
  const Complex phase =
      Complex(0.0, 1.0) * (z - double(order) * (kPi / 2.0) - kPi / 4.0);
  return std::sqrt(2.0 / (kPi * z)) * std::exp(phase) * asymptotic_sum(order, z);
}

Complex hankel1(int order, Complex z) {
  if (z == Complex(0.0, 0.0)) throw OriginSingularity("hankel1 at z = 0");
  return std::abs(z) <= hankel_crossover_radius() ? hankel1_series(order, z)
                                                  : hankel1_asymptotic(order, z);
}

Complex bessel_j_series(int order, Complex z) {
  Complex j, y;
  if (z == Complex(0.0, 0.0)) return order == 0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  if (order == 0) {
    series0(z, j, y);
  } else if (order == 1) {
    series1(z, j, y);
  } else {
    throw std::invalid_argument("bessel_j_series: order must be 0 or 1");
  }
  return j;
}

Complex bessel_y_series(int order, Complex z) {
  if (z == Complex(0.0, 0.0)) throw OriginSingularity("bessel_y at z = 0");
  Complex j, y;
  if (order == 0) {
    series0(z, j, y);
  } else if (order == 1) {
    series1(z, j, y);
  } else {
    throw std::invalid_argument("bessel_y_series: order must be 0 or 1");
  }
  return y;
}

Complex bessel_j1(Complex z) {
  if (std::abs(z) <= hankel_crossover_radius()) return bessel_j_series(1, z);
  // J = (H1 + H2)/2 with H2(z) = conj(H1(conj z)) for real order.
  const Complex h1 = hankel1_asymptotic(1, z);
  const Complex h2 = std::conj(hankel1_asymptotic(1, std::conj(z)));
  return 0.5 * (h1 + h2);
}

}  // namespace specbill
