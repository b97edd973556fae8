#include "specbill/series.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>

namespace specbill {

PowerSeries PowerSeries::truncated(int order) const {
  PowerSeries r(order);
  for (int k = 0; k <= order; ++k) r.c_[k] = (*this)[k];
  return r;
}

PowerSeries PowerSeries::constant(double v, int order) {
  PowerSeries r(order);
  r.c_[0] = v;
  return r;
}

PowerSeries PowerSeries::identity(int order) {
  PowerSeries r(order);
  if (order >= 1) r.c_[1] = 1.0;
  return r;
}

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
  int n = std::max(a.order(), b.order());
  PowerSeries r(n);
  for (int k = 0; k <= n; ++k) r.c_[k] = a[k] + b[k];
  return r;
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
  int n = std::max(a.order(), b.order());
  PowerSeries r(n);
  for (int k = 0; k <= n; ++k) r.c_[k] = a[k] - b[k];
  return r;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  int n = std::max(a.order(), b.order());
  PowerSeries r(n);
  for (int i = 0; i <= a.order() && i <= n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j <= b.order() && i + j <= n; ++j) r.c_[i + j] += a[i] * b[j];
  }
  return r;
}

PowerSeries operator*(double s, const PowerSeries& a) {
  PowerSeries r = a;
  for (auto& v : r.c_) v *= s;
  return r;
}

PowerSeries PowerSeries::cosine(double w, int order) {
  PowerSeries r(order);
  double term = 1.0;  // (-1)^m w^{2m} / (2m)!
  for (int m = 0; 2 * m <= order; ++m) {
    r.c_[2 * m] = term;
    term *= -w * w / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
  }
  return r;
}

PowerSeries PowerSeries::sine(double w, int order) {
  PowerSeries r(order);
  double term = w;  // (-1)^m w^{2m+1} / (2m+1)!
  for (int m = 0; 2 * m + 1 <= order; ++m) {
    r.c_[2 * m + 1] = term;
    term *= -w * w / ((2.0 * m + 2.0) * (2.0 * m + 3.0));
  }
  return r;
}

PowerSeries PowerSeries::compose(const PowerSeries& inner) const {
  assert(inner[0] == 0.0);
  int n = std::max(order(), inner.order());
  // Horner over series: r = c_n; r = r*inner + c_{n-1}; ...
  PowerSeries r = PowerSeries::constant((*this)[order()], n);
  for (int k = order() - 1; k >= 0; --k) {
    r = r * inner;
    r.c_[0] += c_[k];
  }
  return r;
}

PowerSeries PowerSeries::revert() const {
  int n = order();
  assert(n >= 1 && c_[0] == 0.0 && c_[1] != 0.0);
  // Fixed point psi(y) = (y - sum_{k>=2} c_k psi^k) / c_1 gains one correct
  // order per pass, so n passes suffice at truncation order n.
  PowerSeries tail(n);
  for (int k = 2; k <= n; ++k) tail.c_[k] = c_[k];
  PowerSeries psi(n);
  psi.c_[1] = 1.0 / c_[1];
  for (int pass = 0; pass < n; ++pass) {
    PowerSeries t = tail.compose(psi);
    PowerSeries next(n);
    for (int k = 0; k <= n; ++k) next.c_[k] = -t[k] / c_[1];
    next.c_[1] += 1.0 / c_[1];
    psi = next;
  }
  return psi;
}

double PowerSeries::evaluate(double x) const {
  double r = 0.0;
  for (std::size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
  return r;
}

}  // namespace specbill
