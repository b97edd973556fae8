#pragma once

#include <map>
#include <vector>

#include "specbill/geometry.hpp"

namespace specbill {

// Pluggable lower-order term B~(r, j, germ restricted to order 2j-2), shared
// verbatim by the forward model and the recovery subtraction. ZERO is the
// pure round-trip mode; POLY is a documented synthetic polynomial used to
// exercise the subtraction path:
//   POLY: r * sum_{n=2}^{2j-2} f^(n)(0)^2 / (n + j).
enum class LowerOrderModel { ZERO, POLY };

double lower_order_term(LowerOrderModel model, int r, int j, const GraphGerm& germ);

// Observable set {c} union {D_{r,j}}: the forward model output and the
// recovery input. D is keyed r -> j -> value.
struct WaveInvariantTable {
  double L = 0.0;
  double c = 0.0;
  LowerOrderModel model = LowerOrderModel::ZERO;
  std::map<int, std::map<int, double>> D;

  std::vector<int> r_values() const {
    std::vector<int> rs;
    for (const auto& [r, _] : D) rs.push_back(r);
    return rs;
  }
};

// Inverse-Hessian data entering the invariant formula at level (r, j).
struct LeadingCoefficients {
  int r = 0;
  int j = 0;
  double h11 = 0.0;  // diagonal entry of the inverse circulant, size 2r
  double K = 0.0;    // 1 / (2c - 2)
  double Fr = 0.0;   // cube sum
};

LeadingCoefficients leading_coefficients(double c, int r, int j);

// c = 1 + L |f''(0)|: hyperbolicity parameter of the bouncing-ball orbit for
// convex components. Raises Degenerate when f2 = 0 (parabolic orbit).
double cosh_alpha(double L, double f2);

// Main term r { 2 h^j X + [2 h^j K + h^{j-2} F_r] Z } with X = f^(2j)(0) and
// Z = f^(3)(0) f^(2j-1)(0); exposed so the r-scaling property is checkable
// from the LeadingCoefficients alone.
double invariant_main_term(const LeadingCoefficients& lc, double X, double Z);

// D_{r,j} = main term + B~. Requires the germ to carry orders up to 2j.
double forward_invariant(const GraphGerm& germ, int r, int j, LowerOrderModel model);

WaveInvariantTable forward_table(const GraphGerm& germ, const std::vector<int>& rs, int J,
                                 LowerOrderModel model);

// Solves the 2x2 system pairing levels (r1, j) and (r2, j) for
// X = f^(2j)(0), Z = f^(3)(0) f^(2j-1)(0). The caller must have subtracted
// the B~ contributions from the table first. Raises SingularSystem when the
// decoupling determinant vanishes numerically.
std::pair<double, double> decouple(int j, const WaveInvariantTable& table, int r1, int r2);

struct RecoveredGerm {
  GraphGerm germ;
  bool even_symmetry = false;  // Z = 0 branch: odd orders returned as zero
};

// Induction on j: f2 from c, (f3, f4) from j = 2, then one (even, odd) pair
// per level with the B~ term subtracted using the already-recovered jet.
// The f3 >= 0 representative is returned (x -> -x gives an isometric domain).
RecoveredGerm recover_germ(const WaveInvariantTable& table, int J, LowerOrderModel model);

}  // namespace specbill
