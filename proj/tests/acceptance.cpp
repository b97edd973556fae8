// Acceptance gate: one line per criterion, nonzero exit if any fail. Each
// check pins its tolerance in code next to the computation it guards.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "specbill/bem.hpp"
#include "specbill/billiard.hpp"
#include "specbill/circulant.hpp"
#include "specbill/geometry.hpp"
#include "specbill/hankel.hpp"
#include "specbill/spectral_inverse.hpp"

using namespace specbill;

namespace {

constexpr double kPi = 3.14159265358979323846264338;

struct Gate {
  int failures = 0;

  void report(int idx, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s (%s)\n", idx, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---- 1: forward/recover round trip ----------------------------------------
void criterion1(Gate& gate) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> f2d(0.2, 2.0), f3d(0.1, 2.0), rest(-2.0, 2.0);
  const double ls[] = {1.0, 2.0, 4.0};
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    GraphGerm g;
    g.L = ls[trial % 3];
    g.coeffs[2] = f2d(rng);
    g.coeffs[3] = f3d(rng);
    for (int n = 4; n <= 12; ++n) g.coeffs[n] = rest(rng);
    try {
      WaveInvariantTable table = forward_table(g, {2, 4}, 6, LowerOrderModel::ZERO);
      RecoveredGerm rec = recover_germ(table, 6, LowerOrderModel::ZERO);
      for (int n = 2; n <= 12; ++n) {
        const double err =
            std::abs(rec.germ.coeff(n) - g.coeff(n)) / std::max(1.0, std::abs(g.coeff(n)));
        worst = std::max(worst, err);
      }
    } catch (const Error& e) {
      ok = false;
    }
    if (worst > 1e-9) ok = false;
  }
  const double dt = seconds_since(t0);
  ok = ok && worst <= 1e-9 && dt < 10.0;
  gate.report(1, ok, "200 germs to order 12, max rel err " + fmt(worst) + ", " +
                         fmt(dt) + " s");
}

// ---- 2: circulant inverse data ---------------------------------------------
void criterion2(Gate& gate) {
  const auto t0 = std::chrono::steady_clock::now();
  const double cs[] = {1.01, 1.5, 2.0, 3.0, 10.0};
  double worst_row = 0.0, worst_sum = 0.0;
  bool monotone = true;
  for (double c : cs) {
    for (int r = 1; r <= 32; ++r) {
      CirculantHessian h{r, c};
      auto row = inverse_row(h);
      Eigen::MatrixXd inv = dense_inverse(h);
      for (int q = 0; q < 2 * r; ++q)
        worst_row = std::max(worst_row, std::abs(row[q] - inv(0, q)));
      worst_sum = std::max(worst_sum, std::abs(row_sum(h) - 1.0 / (2.0 * c + 2.0)));
    }
    double prev = cube_sum(CirculantHessian{2, c});
    for (int r = 4; r <= 20; r += 2) {
      const double cur = cube_sum(CirculantHessian{r, c});
      if (!(cur > prev)) monotone = false;
      prev = cur;
    }
  }
  const double dt = seconds_since(t0);
  const bool ok = worst_row < 1e-12 && worst_sum < 1e-13 && monotone && dt < 5.0;
  gate.report(2, ok,
              "row err " + fmt(worst_row) + ", sum err " + fmt(worst_sum) +
                  ", cube sums " +
                  (monotone ? "increasing"
                            : "NOT increasing (they decrease toward the "
                              "long-orbit limit; see unit.circulant)") +
                  ", " + fmt(dt) + " s");
}

// ---- 3: return-map multiplier ----------------------------------------------
void criterion3(Gate& gate) {
  const double c2 = poincare(make_two_disk(1.0, 2.0)).cosh_half_alpha;
  const double c4 = poincare(make_two_disk(1.0, 4.0)).cosh_half_alpha;
  const bool ok = std::abs(c2 - 3.0) < 1e-6 && std::abs(c4 - 5.0) < 1e-6;
  gate.report(3, ok, "gap 2: " + fmt(c2 - 3.0) + " from 3, gap 4: " + fmt(c4 - 5.0) +
                         " from 5");
}

// ---- 4: graph Hessian vs circulant -----------------------------------------
void criterion4(Gate& gate) {
  ObstaclePair pair = make_two_disk(1.0, 2.0);
  GraphGerm germ = germ_from_curve(pair.upper(), 2.0, 4);
  const double L = 2.0;
  double worst = 0.0;
  for (int r : {1, 2, 3}) {
    const int m = 2 * r;
    SignPattern pattern;
    for (int i = 0; i < m; ++i)
      pattern.push_back(i % 2 == 0 ? Component::Upper : Component::Lower);
    std::vector<double> xs(m, 0.0);
    const double h = 1e-4;
    Eigen::MatrixXd num(m, m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        auto pp = xs, pm = xs, mp = xs, mm = xs;
        pp[a] += h; pp[b] += h;
        pm[a] += h; pm[b] -= h;
        mp[a] -= h; mp[b] += h;
        mm[a] -= h; mm[b] -= h;
        num(a, b) = (cartesian_length(germ, germ, pattern, pp) -
                     cartesian_length(germ, germ, pattern, pm) -
                     cartesian_length(germ, germ, pattern, mp) +
                     cartesian_length(germ, germ, pattern, mm)) /
                    (4 * h * h);
      }
    }
    Eigen::MatrixXd scaled = L * num;
    Eigen::MatrixXd target = dense_matrix(CirculantHessian{r, 3.0});
    Eigen::VectorXd d(m);
    d(0) = 1.0;
    for (int p = 1; p < m; ++p)
      d(p) = d(p - 1) * (scaled(p - 1, p) * target(p - 1, p) >= 0 ? 1.0 : -1.0);
    Eigen::MatrixXd conj = d.asDiagonal() * target * d.asDiagonal();
    worst = std::max(worst, (scaled - conj).cwiseAbs().maxCoeff());
  }
  gate.report(4, worst < 1e-5, "max entry error " + fmt(worst) + " over r in {1,2,3}");
}

// ---- 5: gradient law --------------------------------------------------------
void criterion5(Gate& gate) {
  std::vector<ObstaclePair> domains;
  domains.push_back(make_two_disk(1.0, 2.0));
  domains.push_back(make_two_ellipse(2.0, 1.0, 2.0));
  domains.push_back(make_perturbed_pair(1.0, 2.0, {0.03, -0.02}));
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> jitter(-0.6, 0.6);
  std::uniform_int_distribution<int> mdist(2, 4), comp(0, 1);

  double worst = 0.0;
  int done = 0;
  while (done < 1000) {
    const ObstaclePair& pair = domains[done % domains.size()];
    const int m = mdist(rng);
    SignPattern pattern(m);
    std::vector<double> ang(m);
    for (int i = 0; i < m; ++i) {
      pattern[i] = comp(rng) == 0 ? Component::Upper : Component::Lower;
      ang[i] = pair.endpoint_phi() + jitter(rng);
    }
    std::vector<double> grad;
    try {
      grad = length_gradient(pair, pattern, ang);
    } catch (const Error&) {
      continue;  // collapsed random draw; redraw
    }
    const double h = 1e-6;
    for (int j = 0; j < m; ++j) {
      auto ap = ang, am = ang;
      ap[j] += h;
      am[j] -= h;
      const double fd = (length(pair, pattern, ap) - length(pair, pattern, am)) / (2 * h);
      worst = std::max(worst,
                       std::abs(fd - grad[j]) / std::max(1.0, std::abs(grad[j])));
    }
    ++done;
  }

  double worst_snell = 0.0;
  for (const auto& pair : domains) {
    for (const auto& orbit : length_spectrum(pair, 9.0, 4))
      for (double s : orbit.snell_residuals) worst_snell = std::max(worst_snell, s);
  }
  const bool ok = worst < 1e-6 && worst_snell < 1e-10;
  gate.report(5, ok, "1000 configs, grad err " + fmt(worst) + ", snell " +
                         fmt(worst_snell));
}

// ---- 6: interior eigenvalue lock --------------------------------------------
double series_root(int n, double lo, double hi) {
  auto f = [&](double x) {
    Complex z(x, 0.0);
    if (n == 0) return bessel_j_series(0, z).real();
    if (n == 1) return bessel_j_series(1, z).real();
    return ((2.0 / x) * bessel_j_series(1, z) - bessel_j_series(0, z)).real();
  };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(lo) < 0) == (f(mid) < 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion6(Gate& gate) {
  const auto t0 = std::chrono::steady_clock::now();
  BoundaryScene scene = BoundaryScene::single(BoundaryCurve::circle({0.0, 0.0}, 1.0));
  const int n = 256;
  const double pinned[] = {2.404825558, 3.831705970, 5.135622302};
  const double oracle[] = {series_root(0, 2.0, 3.0), series_root(1, 3.2, 4.5),
                           series_root(2, 4.8, 5.5)};
  bool ok = true;
  for (int i = 0; i < 3; ++i)
    if (std::abs(oracle[i] - pinned[i]) > 1e-8) ok = false;

  // Locate determinant dips by a blind scan, then refine each by golden
  // section; only afterwards compare against the series-root oracle.
  auto f = [&](double k) { return log_det(assemble(scene, {k, 0.0}, n)).real(); };
  const double k_lo = 2.1, k_hi = 5.45, step = 0.025;
  std::vector<double> grid, val;
  for (double k = k_lo; k <= k_hi + 1e-12; k += step) {
    grid.push_back(k);
    val.push_back(f(k));
  }
  std::vector<double> zeros;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t m = 1; m + 1 < grid.size(); ++m) {
    if (!(val[m] < val[m - 1] && val[m] < val[m + 1])) continue;
    double a = grid[m - 1], b = grid[m + 1];
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-6) {
      if (f1 < f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - gr * (b - a);
        f1 = f(x1);
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + gr * (b - a);
        f2 = f(x2);
      }
    }
    zeros.push_back(0.5 * (a + b));
  }
  double worst = 0.0;
  if (zeros.size() != 3) {
    ok = false;
  } else {
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::abs(zeros[i] - oracle[i]));
  }
  const double dt = seconds_since(t0);
  ok = ok && worst < 1e-3 && dt < 30.0;
  gate.report(6, ok, std::to_string(zeros.size()) + " dips, zero offsets max " +
                         fmt(worst) + ", " + fmt(dt) + " s");
}

// ---- 7: windowed trace transform ---------------------------------------------
void criterion7(Gate& gate) {
  const auto t0 = std::chrono::steady_clock::now();
  ObstaclePair pair = make_two_disk(1.0, 2.0);
  std::vector<double> expected;
  for (const auto& o : length_spectrum(pair, 9.0, 4)) expected.push_back(o.length);
  BoundaryScene scene = BoundaryScene::mirror_pair(pair);
  PoissonOptions opt;
  opt.tau = 0.1;
  opt.n = 192;
  bool ok = expected.size() == 2;
  std::string detail;
  try {
    PoissonResult res = poisson_spectrum(scene, 20.0, 80.0, opt);
    if (res.peaks.size() < 2) {
      ok = false;
      detail = "fewer than two peaks";
    } else {
      double p1 = res.peaks[0].t, p2 = res.peaks[1].t;
      if (p1 > p2) std::swap(p1, p2);
      const double cell = res.cell;
      ok = ok && std::abs(p1 - expected[0]) <= cell && std::abs(p2 - expected[1]) <= cell;
      detail = "peaks at t = " + fmt(p1) + ", " + fmt(p2) + ", cell " + fmt(cell);
    }
  } catch (const Error& e) {
    ok = false;
    detail = std::string("error: ") + e.code();
  }
  const double dt = seconds_since(t0);
  ok = ok && dt < 300.0;
  gate.report(7, ok, detail + ", " + fmt(dt) + " s");
}

// ---- 8: special-function branches ---------------------------------------------
void criterion8(Gate& gate) {
  double worst_ring = 0.0;
  for (int order : {0, 1}) {
    for (int a = 0; a <= 64; ++a) {
      const double th = kPi * a / 64.0;
      const Complex z = 12.0 * std::exp(Complex(0.0, th));
      const Complex s = hankel1_series(order, z);
      const Complex asym = hankel1_asymptotic(order, z);
      worst_ring =
          std::max(worst_ring, std::abs(s - asym) / std::max(1.0, std::abs(s)));
    }
  }
  // Two-term large-argument form; the leading correction i a1 / z is part of
  // the canonical expansion and removes a 2.5e-3 mathematical offset.
  double worst_ratio = 0.0;
  for (int order : {0, 1}) {
    const double a1 = (4.0 * order * order - 1.0) / 8.0;
    for (int a = 0; a <= 16; ++a) {
      const double th = kPi * a / 16.0;
      const Complex z = 50.0 * std::exp(Complex(0.0, th));
      const Complex form = std::sqrt(2.0 / (kPi * z)) *
                           std::exp(Complex(0.0, 1.0) *
                                    (z - double(order) * kPi / 2.0 - kPi / 4.0)) *
                           (1.0 + Complex(0.0, 1.0) * a1 / z);
      worst_ratio = std::max(worst_ratio, std::abs(hankel1(order, z) / form - 1.0));
    }
  }
  const bool ok = worst_ring < 1e-10 && worst_ratio < 1e-3;
  gate.report(8, ok, "ring mismatch " + fmt(worst_ring) + ", form ratio offset " +
                         fmt(worst_ratio));
}

// ---- 9: resonance chain ---------------------------------------------------------
void criterion9(Gate& gate) {
  const auto t0 = std::chrono::steady_clock::now();
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  ResonanceScanOptions opt;
  opt.n = 128;
  std::vector<ResonanceCandidate> found;
  std::string detail;
  bool ok = true;
  try {
    found = resonance_scan(scene, 5.0, 15.0, -0.6, 0.0, opt);
  } catch (const Error& e) {
    ok = false;
    detail = std::string("error: ") + e.code();
  }
  if (ok) {
    if (found.size() < 3) {
      ok = false;
      detail = "only " + std::to_string(found.size()) + " candidates";
    } else {
      std::vector<double> spacing;
      for (std::size_t i = 1; i < found.size(); ++i)
        spacing.push_back(found[i].k.real() - found[i - 1].k.real());
      double mean = 0.0;
      for (double s : spacing) mean += s;
      mean /= double(spacing.size());
      double worst = 0.0;
      for (double s : spacing) worst = std::max(worst, std::abs(s - mean) / mean);
      bool windings = true;
      for (const auto& c : found) windings = windings && c.winding == 1 && c.converged;
      ok = worst < 0.05 && windings;
      detail = std::to_string(found.size()) + " resonances, spacing spread " +
               fmt(worst) + ", mean " + fmt(mean) +
               (windings ? ", windings 1" : ", bad winding");
    }
  }
  gate.report(9, ok, detail + ", " + fmt(seconds_since(t0)) + " s");
}

}  // namespace

int main() {
  Gate gate;
  criterion1(gate);
  criterion2(gate);
  criterion3(gate);
  criterion4(gate);
  criterion5(gate);
  criterion6(gate);
  criterion7(gate);
  criterion8(gate);
  criterion9(gate);
  if (gate.failures > 0) {
    std::printf("%d criteria failed\n", gate.failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
