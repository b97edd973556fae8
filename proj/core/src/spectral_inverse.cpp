#include "specbill/spectral_inverse.hpp"

#include <algorithm>
#include <cmath>

#include "specbill/circulant.hpp"
#include "specbill/circulant_exact.hpp"

namespace specbill {

namespace {

Rational rat_pow(const Rational& x, int e) {
  Rational p(1);
  for (int i = 0; i < e; ++i) p *= x;
  return p;
}

struct ExactLeading {
  Rational h11, cube;
};

ExactLeading exact_leading(int r, const Rational& c) {
  ExactLeading lc;
  auto row = exact_inverse_row(r, c);
  lc.h11 = row[0];
  lc.cube = 0;
  for (const Rational& v : row) lc.cube += v * v * v;
  return lc;
}

Rational exact_main_term(const ExactLeading& lc, const Rational& K, int r, int j,
                         const Rational& x, const Rational& z) {
  Rational hj = rat_pow(lc.h11, j);
  Rational hjm2 = rat_pow(lc.h11, j - 2);
  return Rational(r) * (2 * hj * x + (2 * hj * K + hjm2 * lc.cube) * z);
}

// The decoupling system is ill conditioned (its determinant carries the
// F_r/(h11)^2 separation, which shrinks like the fourth power of the inverse
// row's decay rate), so the solve runs over exact rationals; the only noise
// left is the rounding already present in the table entries.
class ExactDecoupler {
 public:
  ExactDecoupler(double c, int r1, int r2) : r1_(r1), r2_(r2), c_(c) {
    K_ = Rational(1) / (2 * c_ - 2);
    ExactLeading l1 = exact_leading(r1_, c_);
    ExactLeading l2 = exact_leading(r2_, c_);
    h1_ = l1.h11;
    f1_ = l1.cube;
    h2_ = l2.h11;
    f2_ = l2.cube;
  }

  std::pair<double, double> solve(int j, double d1, double d2) const {
    Rational a1 = Rational(r1_) * 2 * rat_pow(h1_, j);
    Rational b1 = Rational(r1_) * (2 * rat_pow(h1_, j) * K_ + rat_pow(h1_, j - 2) * f1_);
    Rational a2 = Rational(r2_) * 2 * rat_pow(h2_, j);
    Rational b2 = Rational(r2_) * (2 * rat_pow(h2_, j) * K_ + rat_pow(h2_, j - 2) * f2_);
    Rational det = a1 * b2 - a2 * b1;
    double scale = std::max({std::abs((a1 * b2).convert_to<double>()),
                             std::abs((a2 * b1).convert_to<double>()), 1e-300});
    if (std::abs(det.convert_to<double>()) < 1e-14 * scale)
      throw SingularSystem("decoupling determinant vanished");
    Rational rd1(d1), rd2(d2);
    Rational x = (rd1 * b2 - rd2 * b1) / det;
    Rational z = (a1 * rd2 - a2 * rd1) / det;
    return {x.convert_to<double>(), z.convert_to<double>()};
  }

 private:
  int r1_, r2_;
  Rational c_, K_, h1_, f1_, h2_, f2_;
};

}  // namespace

double lower_order_term(LowerOrderModel model, int r, int j, const GraphGerm& germ) {
  switch (model) {
    case LowerOrderModel::ZERO:
      return 0.0;
    case LowerOrderModel::POLY: {
      double s = 0.0;
      for (int n = 2; n <= 2 * j - 2; ++n) {
        double f = germ.coeff(n);
        s += f * f / double(n + j);
      }
      return double(r) * s;
    }
  }
  return 0.0;
}

double cosh_alpha(double L, double f2) {
  if (L <= 0.0) throw std::invalid_argument("L must be > 0");
  if (f2 == 0.0) throw Degenerate("f''(0) = 0: parabolic bouncing ball");
  return 1.0 + L * std::abs(f2);
}

LeadingCoefficients leading_coefficients(double c, int r, int j) {
  if (!(c > 1.0)) throw Degenerate("requires c > 1");
  CirculantHessian h{r, c};
  LeadingCoefficients lc;
  lc.r = r;
  lc.j = j;
  lc.h11 = inverse_row(h)[0];
  lc.K = 1.0 / (2.0 * c - 2.0);
  lc.Fr = cube_sum(h);
  return lc;
}

double invariant_main_term(const LeadingCoefficients& lc, double X, double Z) {
  double hj = std::pow(lc.h11, lc.j);
  double hjm2 = std::pow(lc.h11, lc.j - 2);
  return double(lc.r) * (2.0 * hj * X + (2.0 * hj * lc.K + hjm2 * lc.Fr) * Z);
}

namespace {

Rational exact_lower_order(LowerOrderModel model, int r, int j, const GraphGerm& germ) {
  if (model != LowerOrderModel::POLY) return Rational(0);
  Rational s(0);
  for (int n = 2; n <= 2 * j - 2; ++n) {
    Rational f(germ.coeff(n));
    s += f * f / (n + j);
  }
  return Rational(r) * s;
}

Rational exact_invariant(const GraphGerm& germ, const ExactLeading& lc, const Rational& K,
                         int r, int j, LowerOrderModel model) {
  if (j < 2) throw std::invalid_argument("j must be >= 2");
  if (!germ.has(2)) throw MissingCoefficient("germ lacks f''(0)");
  if (germ.max_order() < 2 * j)
    throw MissingCoefficient("germ lacks orders up to 2j");
  Rational x(germ.coeff(2 * j));
  Rational z = Rational(germ.coeff(3)) * Rational(germ.coeff(2 * j - 1));
  return exact_main_term(lc, K, r, j, x, z) + exact_lower_order(model, r, j, germ);
}

}  // namespace

double forward_invariant(const GraphGerm& germ, int r, int j, LowerOrderModel model) {
  if (j < 2) throw std::invalid_argument("j must be >= 2");
  if (!germ.has(2)) throw MissingCoefficient("germ lacks f''(0)");
  if (germ.max_order() < 2 * j)
    throw MissingCoefficient("germ lacks orders up to 2j");
  Rational c(cosh_alpha(germ.L, germ.coeff(2)));
  if (!(c > 1)) throw Degenerate("requires c > 1");
  ExactLeading lc = exact_leading(r, c);
  Rational K = Rational(1) / (2 * c - 2);
  return exact_invariant(germ, lc, K, r, j, model).convert_to<double>();
}

WaveInvariantTable forward_table(const GraphGerm& germ, const std::vector<int>& rs, int J,
                                 LowerOrderModel model) {
  WaveInvariantTable t;
  t.L = germ.L;
  t.c = cosh_alpha(germ.L, germ.coeff(2));
  t.model = model;
  Rational c(t.c);
  if (!(c > 1)) throw Degenerate("requires c > 1");
  Rational K = Rational(1) / (2 * c - 2);
  for (int r : rs) {
    ExactLeading lc = exact_leading(r, c);
    for (int j = 2; j <= J; ++j)
      t.D[r][j] = exact_invariant(germ, lc, K, r, j, model).convert_to<double>();
  }
  return t;
}

std::pair<double, double> decouple(int j, const WaveInvariantTable& table, int r1, int r2) {
  if (r1 == r2) throw std::invalid_argument("decoupling needs distinct r");
  if (!(table.c > 1.0)) throw Degenerate("table requires c > 1");
  auto fetch = [&](int r) {
    auto itr = table.D.find(r);
    if (itr == table.D.end()) throw MissingCoefficient("table lacks requested r");
    auto itj = itr->second.find(j);
    if (itj == itr->second.end()) throw MissingCoefficient("table lacks requested j");
    return itj->second;
  };
  double d1 = fetch(r1), d2 = fetch(r2);
  return ExactDecoupler(table.c, r1, r2).solve(j, d1, d2);
}

RecoveredGerm recover_germ(const WaveInvariantTable& table, int J, LowerOrderModel model) {
  if (J < 2) throw std::invalid_argument("J must be >= 2");
  if (!(table.c > 1.0)) throw Degenerate("table requires c > 1");
  if (table.L <= 0.0) throw std::invalid_argument("table requires L > 0");

  // Decoupling needs two distinct even r.
  std::vector<int> evens;
  for (const auto& [r, _] : table.D)
    if (r % 2 == 0) evens.push_back(r);
  if (evens.size() < 2)
    throw std::invalid_argument("table needs at least two even r for decoupling");
  int r1 = evens[0], r2 = evens[1];

  RecoveredGerm out;
  out.germ.L = table.L;
  out.germ.coeffs[2] = (table.c - 1.0) / table.L;

  ExactDecoupler dec(table.c, r1, r2);
  auto fetch = [&](int r, int j) {
    auto itr = table.D.find(r);
    if (itr == table.D.end()) throw MissingCoefficient("table lacks requested r");
    auto itj = itr->second.find(j);
    if (itj == itr->second.end()) throw MissingCoefficient("table lacks requested j");
    return itj->second;
  };

  double f3 = 0.0;
  for (int j = 2; j <= J; ++j) {
    const double d1 = fetch(r1, j) - lower_order_term(model, r1, j, out.germ);
    const double d2 = fetch(r2, j) - lower_order_term(model, r2, j, out.germ);
    auto [X, Z] = dec.solve(j, d1, d2);
    if (j == 2) {
      if (Z < -1e-12) throw NegativeSquare("(f''')^2 recovered negative");
      if (Z > 1e-12) {
        f3 = std::sqrt(Z);
      } else {
        f3 = 0.0;
        out.even_symmetry = true;
      }
      out.germ.coeffs[3] = f3;
      out.germ.coeffs[4] = X;
    } else {
      out.germ.coeffs[2 * j] = X;
      if (std::abs(f3) < 1e-12) {
        if (std::abs(Z) > 1e-10)
          throw OddObstruction("f'''(0) = 0 but a later odd invariant is nonzero");
        out.germ.coeffs[2 * j - 1] = 0.0;
      } else {
        out.germ.coeffs[2 * j - 1] = Z / f3;
      }
    }
  }
  return out;
}

}  // namespace specbill
