#include <cmath>
#include <complex>

#include "doctest.h"
#include "specbill/bem.hpp"

using namespace specbill;

namespace {
constexpr double kPi = 3.14159265358979323846264338;

BoundaryScene unit_circle_scene() {
  return BoundaryScene::single(BoundaryCurve::circle({0.0, 0.0}, 1.0));
}

// H_n and J_n for n = 0..2 from the order-recurrence; reference route for the
// circle eigenvalue identity.
Complex ref_h(int n, double k) {
  const Complex h0 = hankel1(0, Complex(k, 0.0));
  const Complex h1 = hankel1(1, Complex(k, 0.0));
  if (n == 0) return h0;
  if (n == 1) return h1;
  return (2.0 / k) * h1 - h0;
}
Complex ref_hp(int n, double k) {  // derivative H_n'
  if (n == 0) return -ref_h(1, k);
  return ref_h(n - 1, k) - (double(n) / k) * ref_h(n, k);
}
Complex ref_j(int n, double k) {
  const Complex j0 = bessel_j_series(0, Complex(k, 0.0));
  const Complex j1 = bessel_j_series(1, Complex(k, 0.0));
  if (n == 0) return j0;
  if (n == 1) return j1;
  return (2.0 / k) * j1 - j0;
}
}  // namespace

TEST_SUITE("bem") {

TEST_CASE("diagonal kernel limit on the unit circle") {
  BoundaryScene scene = unit_circle_scene();
  CHECK(kernel_diagonal(scene, 0, 0.7).real() ==
        doctest::Approx(-1.0 / (4.0 * kPi)).epsilon(1e-12));
  CHECK(kernel_diagonal(scene, 0, 0.7).imag() == 0.0);
  CHECK_THROWS_AS(kernel(scene, {2.0, 0.0}, 0, 0.7, 0, 0.7), DiagonalSingularity);
}

TEST_CASE("mirror symmetry of the kernel and the assembled blocks") {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  ComplexWavenumber kw{3.0, 0.2};
  for (auto [a, b] : {std::pair{0.3, 5.1}, {1.2, 2.2}}) {
    const Complex uv = kernel(scene, kw, 0, a, 1, b);
    const Complex vu = kernel(scene, kw, 1, a, 0, b);
    CHECK(std::abs(uv - vu) < 1e-14 * std::max(1.0, std::abs(uv)));
  }
  NystromOperator op = assemble(scene, kw, 32);
  const int n = 32;
  CHECK((op.matrix.block(0, 0, n, n) - op.matrix.block(n, n, n, n)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((op.matrix.block(0, n, n, n) - op.matrix.block(n, 0, n, n)).cwiseAbs().maxCoeff() == 0.0);
  // Cross block is plain trapezoid of the doubled half kernel.
  const double h = 2.0 * kPi / n;
  for (int i : {0, 5}) {
    for (int j : {3, 17}) {
      const Complex direct = -2.0 * h * kernel(scene, kw, 0, h * i, 1, h * j);
      CHECK(std::abs(op.matrix(i, n + j) - direct) < 1e-13 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("circle operator reproduces the separated eigenvalues") {
  BoundaryScene scene = unit_circle_scene();
  const double k = 2.0;
  NystromOperator op = assemble(scene, {k, 0.0}, 64);
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(64, 64) + op.matrix;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(full);
  for (int n = 0; n <= 2; ++n) {
    const Complex expect = -Complex(0.0, 1.0) * kPi * k * ref_j(n, k) * ref_hp(n, k);
    double best = 1e9;
    for (int i = 0; i < 64; ++i)
      best = std::min(best, std::abs(es.eigenvalues()(i) - expect));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("determinant converges under quadrature refinement") {
  // Resolved modes converge spectrally but the truncated high-mode tail of
  // log det decays algebraically, about fourth order in the grid.
  BoundaryScene scene = unit_circle_scene();
  ComplexWavenumber kw{2.0, 0.1};
  const Complex a = log_det(assemble(scene, kw, 32));
  const Complex b = log_det(assemble(scene, kw, 64));
  const Complex c = log_det(assemble(scene, kw, 128));
  CHECK(std::abs(b - c) < std::abs(a - b) / 8.0);
  CHECK(std::abs(b - c) < 1e-5);
}

TEST_CASE("determinant dips at the first interior eigenvalues") {
  BoundaryScene scene = unit_circle_scene();
  for (double root : {2.404825557695773, 3.831705970207512}) {
    const double at = log_det(assemble(scene, {root, 0.0}, 64)).real();
    const double off = log_det(assemble(scene, {root + 0.05, 0.0}, 64)).real();
    CHECK(at < off - 4.0);  // several orders of magnitude in |det|
  }
}

TEST_CASE("derivative routes agree") {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  ComplexWavenumber kw{5.0, 0.3};
  const Complex via_det = log_det_derivative(scene, kw, 64, 1e-4);
  const Complex via_trace = trace_derivative(scene, kw, 64, 1e-4);
  CHECK(std::abs(via_det - via_trace) < 1e-6 * std::max(1.0, std::abs(via_trace)));
}

TEST_CASE("trace powers match the spectrum") {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  NystromOperator op = assemble(scene, {4.0, 0.5}, 32);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.matrix);
  for (int m : {1, 2, 3}) {
    Complex spect(0.0, 0.0);
    for (int i = 0; i < op.matrix.rows(); ++i)
      spect += std::pow(es.eigenvalues()(i), m);
    CHECK(std::abs(trace_power(op, m) - spect) < 1e-9 * std::max(1.0, std::abs(spect)));
  }
}

TEST_CASE("operator decays across the gap under damping") {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  NystromOperator op = assemble(scene, {5.0, 10.0}, 64);
  const int n = 64;
  CHECK(op.matrix.block(0, n, n, n).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(op.matrix.block(0, 0, n, n).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("branch tracking winds once around an interior zero") {
  BoundaryScene scene = unit_circle_scene();
  const double k0 = 2.404825557695773;
  const double r = 0.03;
  std::vector<ComplexWavenumber> loop;
  const int steps = 16;
  for (int i = 0; i <= steps; ++i) {
    const double a = 2.0 * kPi * i / steps;
    loop.push_back({k0 + r * std::cos(a), r * std::sin(a)});
  }
  auto ld = log_det_path(scene, loop, 64);
  const double total = ld.back().imag() - ld.front().imag();
  CHECK(std::lround(total / (2.0 * kPi)) == 1);
  CHECK(std::abs(ld.back().real() - ld.front().real()) < 1e-10);
}

TEST_CASE("scan refines the interior zero with unit winding") {
  BoundaryScene scene = unit_circle_scene();
  ResonanceScanOptions opt;
  opt.grid_re = 8;
  opt.grid_im = 4;
  opt.n = 64;
  auto found = resonance_scan(scene, 2.3, 2.5, -0.04, 0.04, opt);
  REQUIRE(found.size() == 1);
  CHECK(found[0].converged);
  CHECK(found[0].winding == 1);
  CHECK(std::abs(found[0].k - Complex(2.404825557695773, 0.0)) < 1e-6);
  CHECK(found[0].abs_det < 1e-6);
}

TEST_CASE("scan finds the exterior chain below the axis") {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  ResonanceScanOptions opt;
  opt.grid_re = 16;
  opt.grid_im = 6;
  opt.n = 64;
  auto found = resonance_scan(scene, 6.0, 8.2, -0.6, -0.25, opt);
  REQUIRE(found.size() == 2);
  for (const auto& c : found) {
    CHECK(c.converged);
    CHECK(c.winding == 1);
    CHECK(c.k.imag() < -0.30);
    CHECK(c.k.imag() > -0.55);
  }
  // Chain members sit near n pi / 2 with a slowly varying curvature shift.
  CHECK(std::abs(found[0].k.real() - 2.0 * kPi) < 0.15);
  CHECK(std::abs(found[1].k.real() - 2.5 * kPi) < 0.15);
  CHECK(std::abs(found[1].k.real() - found[0].k.real() - 0.5 * kPi) < 0.1);
}

TEST_CASE("axis zeros are kept only when the rectangle straddles the axis") {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  ResonanceScanOptions opt;
  opt.grid_re = 8;
  opt.grid_im = 6;
  opt.n = 64;
  // Second J0 zero: a Dirichlet eigenvalue of each disk, doubled across the
  // two components, hence winding 2 around one point.
  auto across = resonance_scan(scene, 5.4, 5.6, -0.1, 0.1, opt);
  REQUIRE(across.size() == 1);
  CHECK(std::abs(across[0].k - Complex(5.520078110286311, 0.0)) < 1e-5);
  CHECK(across[0].winding == 2);
  // The same window closed at the axis is a resonance scan and stays empty.
  auto below = resonance_scan(scene, 5.4, 5.6, -0.3, 0.0, opt);
  CHECK(below.empty());
}

TEST_CASE("poisson peaks sit on the bouncing-ball lengths") {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  PoissonOptions opt;
  opt.n = 96;
  opt.tau = 0.1;
  PoissonResult res = poisson_spectrum(scene, 20.0, 40.0, opt);
  REQUIRE(res.peaks.size() >= 2);
  CHECK(std::abs(res.peaks[0].t - 4.0) <= res.cell);
  CHECK(std::abs(res.peaks[1].t - 8.0) <= res.cell);
  CHECK(res.peaks[0].amplitude > res.peaks[1].amplitude);
}

TEST_CASE("free space is silent") {
  BoundaryScene scene = BoundaryScene::free_space();
  CHECK(assemble(scene, {3.0, 0.1}, 32).matrix.rows() == 0);
  CHECK(log_det(assemble(scene, {3.0, 0.1}, 32)) == Complex(0.0, 0.0));
  PoissonOptions opt;
  opt.n = 32;
  PoissonResult res = poisson_spectrum(scene, 5.0, 11.0, opt);
  CHECK(res.peaks.empty());
  for (double a : res.amplitude) CHECK(a == 0.0);
}

TEST_CASE("window must resolve the shortest gap") {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  PoissonOptions opt;
  opt.n = 32;
  CHECK_THROWS_AS(poisson_spectrum(scene, 20.0, 22.0, opt), WindowTooNarrow);
}

TEST_CASE("assembly validates the grid") {
  BoundaryScene scene = unit_circle_scene();
  CHECK_THROWS_AS(assemble(scene, {2.0, 0.0}, 15), std::invalid_argument);
  CHECK_THROWS_AS(assemble(scene, {2.0, 0.0}, 33), std::invalid_argument);
  CHECK_THROWS_AS(BoundaryScene::single(BoundaryCurve::graph_patch(
                      GraphGerm{2.0, {{2, 1.0}}}, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(BoundaryScene::mirror_pair(make_germ_pair(GraphGerm{2.0, {{2, 1.0}}}, 0.5)),
                  std::invalid_argument);
}

}  // TEST_SUITE
