#include <cmath>
#include <random>

#include "doctest.h"
#include "specbill/spectral_inverse.hpp"

using namespace specbill;

namespace {

GraphGerm sample_germ(double L, int max_order, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> f2d(0.2, 2.0), f3d(0.1, 2.0), rest(-2.0, 2.0);
  GraphGerm g;
  g.L = L;
  g.coeffs[2] = f2d(rng);
  if (max_order >= 3) g.coeffs[3] = f3d(rng);
  for (int n = 4; n <= max_order; ++n) g.coeffs[n] = rest(rng);
  return g;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("spectral_inverse") {

TEST_CASE("leading coefficients at the pinned word") {
  LeadingCoefficients lc = leading_coefficients(3.0, 2, 2);
  CHECK(lc.h11 == doctest::Approx(17.0 / 96.0).epsilon(1e-14));
  CHECK(lc.K == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(lc.Fr == doctest::Approx(4860.0 / 884736.0).epsilon(1e-13));
}

TEST_CASE("hyperbolicity parameter from the second derivative") {
  CHECK(cosh_alpha(2.0, 1.0) == doctest::Approx(3.0));
  CHECK(cosh_alpha(4.0, 1.0) == doctest::Approx(5.0));
  CHECK(cosh_alpha(2.0, -1.0) == doctest::Approx(3.0));  // |f''|
  CHECK_THROWS_AS(cosh_alpha(2.0, 0.0), Degenerate);
  CHECK_THROWS_AS(cosh_alpha(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("forward invariant pinned at the unit example") {
  GraphGerm g;
  g.L = 2.0;
  g.coeffs = {{2, 1.0}, {3, 1.0}, {4, 1.0}};
  const double d = forward_invariant(g, 2, 2, LowerOrderModel::ZERO);
  CHECK(d == doctest::Approx(6185.0 / 36864.0).epsilon(1e-14));
}

TEST_CASE("polynomial lower-order term value") {
  GraphGerm g;
  g.L = 2.0;
  g.coeffs = {{2, 0.5}, {3, 1.5}, {4, -1.0}, {5, 0.25}, {6, 2.0}};
  // j = 3 uses orders 2..4 only: r (f2^2/5 + f3^2/6 + f4^2/7).
  const double expect = 2.0 * (0.25 / 5.0 + 2.25 / 6.0 + 1.0 / 7.0);
  CHECK(lower_order_term(LowerOrderModel::POLY, 2, 3, g) ==
        doctest::Approx(expect).epsilon(1e-14));
  CHECK(lower_order_term(LowerOrderModel::ZERO, 2, 3, g) == 0.0);
}

TEST_CASE("missing orders are reported") {
  GraphGerm g;
  g.L = 2.0;
  g.coeffs = {{2, 1.0}, {3, 0.5}};
  CHECK_THROWS_AS(forward_invariant(g, 2, 2, LowerOrderModel::ZERO), MissingCoefficient);
}

TEST_CASE("round trip with no lower-order correction") {
  for (unsigned seed : {1u, 2u, 3u}) {
    GraphGerm g = sample_germ(2.0, 10, seed);
    const int J = 5;
    WaveInvariantTable table = forward_table(g, {2, 4}, J, LowerOrderModel::ZERO);
    CHECK(table.c == doctest::Approx(1.0 + 2.0 * g.coeff(2)).epsilon(1e-14));
    RecoveredGerm rec = recover_germ(table, J, LowerOrderModel::ZERO);
    CHECK_FALSE(rec.even_symmetry);
    for (int n = 2; n <= 10; ++n)
      CHECK(rel_err(rec.germ.coeff(n), g.coeff(n)) < 1e-10);
  }
}

TEST_CASE("round trip with the polynomial lower-order term") {
  // The table stores main + correction as one double while the main term
  // shrinks like h11^(j-2), so recovery must subtract two O(1) numbers and
  // the achievable accuracy decays with j and with the conditioning in c.
  // Keep j and c modest here and budget the tolerance accordingly.
  for (unsigned seed : {1u, 2u, 3u}) {
    GraphGerm g = sample_germ(1.0, 6, seed);
    const int J = 3;
    WaveInvariantTable table = forward_table(g, {2, 4}, J, LowerOrderModel::POLY);
    RecoveredGerm rec = recover_germ(table, J, LowerOrderModel::POLY);
    CHECK_FALSE(rec.even_symmetry);
    for (int n = 2; n <= 6; ++n)
      CHECK(rel_err(rec.germ.coeff(n), g.coeff(n)) < 1e-8);
  }
}

TEST_CASE("even boundary recovers with the symmetry flag") {
  GraphGerm g;
  g.L = 1.0;
  g.coeffs = {{2, 0.7}, {3, 0.0}, {4, 1.1}, {5, 0.0}, {6, -0.4}, {7, 0.0}, {8, 0.9}};
  WaveInvariantTable table = forward_table(g, {2, 4}, 4, LowerOrderModel::ZERO);
  RecoveredGerm rec = recover_germ(table, 4, LowerOrderModel::ZERO);
  CHECK(rec.even_symmetry);
  for (int n = 2; n <= 8; n += 2)
    CHECK(rel_err(rec.germ.coeff(n), g.coeff(n)) < 1e-10);
  for (int n = 3; n <= 7; n += 2) CHECK(rec.germ.coeff(n) == 0.0);
}

TEST_CASE("negative odd square is rejected") {
  // Table consistent with X = 0, Z = -1 at j = 2: no real third derivative.
  WaveInvariantTable table;
  table.L = 2.0;
  table.c = 3.0;
  table.model = LowerOrderModel::ZERO;
  for (int r : {2, 4}) {
    LeadingCoefficients lc = leading_coefficients(3.0, r, 2);
    table.D[r][2] = invariant_main_term(lc, 0.0, -1.0);
  }
  CHECK_THROWS_AS(recover_germ(table, 2, LowerOrderModel::ZERO), NegativeSquare);
}

TEST_CASE("odd obstruction at higher level") {
  GraphGerm g;
  g.L = 1.0;
  g.coeffs = {{2, 0.7}, {3, 0.0}, {4, 1.3}, {5, 0.0}, {6, 0.2}};
  WaveInvariantTable table = forward_table(g, {2, 4}, 3, LowerOrderModel::ZERO);
  const double c = table.c;
  for (int r : {2, 4}) {
    LeadingCoefficients lc = leading_coefficients(c, r, 3);
    // Inject a nonzero odd product the even branch cannot absorb.
    table.D[r][3] += double(r) *
                     (2.0 * std::pow(lc.h11, 3) * lc.K + lc.h11 * lc.Fr) * 0.5;
  }
  CHECK_THROWS_AS(recover_germ(table, 3, LowerOrderModel::ZERO), OddObstruction);
}

TEST_CASE("decoupling requires distinct words") {
  GraphGerm g = sample_germ(2.0, 8, 11u);
  WaveInvariantTable table = forward_table(g, {2, 4}, 4, LowerOrderModel::ZERO);
  CHECK_THROWS_AS(decouple(3, table, 2, 2), std::invalid_argument);
}

TEST_CASE("recovery validates its inputs") {
  GraphGerm g = sample_germ(2.0, 8, 5u);
  WaveInvariantTable two = forward_table(g, {2}, 4, LowerOrderModel::ZERO);
  CHECK_THROWS_AS(recover_germ(two, 4, LowerOrderModel::ZERO), std::invalid_argument);

  WaveInvariantTable table = forward_table(g, {2, 4}, 3, LowerOrderModel::ZERO);
  CHECK_THROWS_AS(recover_germ(table, 4, LowerOrderModel::ZERO), MissingCoefficient);
}

TEST_CASE("longer words weight the invariant linearly in the prefactor") {
  LeadingCoefficients lc = leading_coefficients(2.5, 4, 3);
  const double base = invariant_main_term(lc, 1.0, 0.0);
  CHECK(base == doctest::Approx(4.0 * 2.0 * std::pow(lc.h11, 3)).epsilon(1e-13));
  const double zpart = invariant_main_term(lc, 0.0, 1.0);
  CHECK(zpart == doctest::Approx(4.0 * (2.0 * std::pow(lc.h11, 3) * lc.K +
                                        lc.h11 * lc.Fr)).epsilon(1e-13));
}

}  // TEST_SUITE
