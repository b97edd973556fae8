#pragma once

#include <vector>

namespace specbill {

// Truncated real power series a[0] + a[1] x + ... + a[order] x^order.
// All operations truncate at the common order; used for chart changes
// (parametric curve -> graph function) where orders stay small (<= ~26).
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(int order) : c_(order + 1, 0.0) {}
  PowerSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return k >= 0 && k <= order() ? c_[k] : 0.0; }
  double& at(int k) { return c_[k]; }
  const std::vector<double>& coeffs() const { return c_; }

  PowerSeries truncated(int order) const;

  static PowerSeries constant(double v, int order);
  static PowerSeries identity(int order);  // x

  friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
  friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  friend PowerSeries operator*(double s, const PowerSeries& a);

  // cos(w x) and sin(w x) truncated at `order`.
  static PowerSeries cosine(double w, int order);
  static PowerSeries sine(double w, int order);

  // this(inner(x)); requires inner[0] == 0.
  PowerSeries compose(const PowerSeries& inner) const;

  // Functional inverse: given y(x) with y(0) = 0, y'(0) != 0, returns x(y)
  // with the same truncation order.
  PowerSeries revert() const;

  double evaluate(double x) const;

 private:
  std::vector<double> c_;
};

}  // namespace specbill
