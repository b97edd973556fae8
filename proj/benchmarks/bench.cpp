#include <benchmark/benchmark.h>

#include "specbill/bem.hpp"
#include "specbill/billiard.hpp"
#include "specbill/circulant.hpp"
#include "specbill/hankel.hpp"
#include "specbill/spectral_inverse.hpp"

using namespace specbill;

namespace {

void bm_hankel_series(benchmark::State& state) {
  Complex z(7.0, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(hankel1(0, z));
}
BENCHMARK(bm_hankel_series);

void bm_hankel_asymptotic(benchmark::State& state) {
  Complex z(40.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(hankel1(0, z));
}
BENCHMARK(bm_hankel_asymptotic);

void bm_inverse_row(benchmark::State& state) {
  CirculantHessian h{int(state.range(0)), 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(inverse_row(h));
}
BENCHMARK(bm_inverse_row)->Arg(4)->Arg(16)->Arg(64);

void bm_cube_sum(benchmark::State& state) {
  CirculantHessian h{int(state.range(0)), 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(cube_sum(h));
}
BENCHMARK(bm_cube_sum)->Arg(4)->Arg(16);

void bm_find_orbit(benchmark::State& state) {
  ObstaclePair pair = make_two_ellipse(2.0, 1.0, 2.0);
  SignPattern pattern{Component::Upper, Component::Lower, Component::Upper,
                      Component::Lower};
  const double phi0 = pair.endpoint_phi();
  std::vector<double> seed{phi0 + 0.2, phi0 - 0.1, phi0 - 0.2, phi0 + 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(find_orbit(pair, pattern, seed));
}
BENCHMARK(bm_find_orbit);

void bm_forward_recover(benchmark::State& state) {
  GraphGerm g;
  g.L = 2.0;
  g.coeffs = {{2, 0.7}, {3, 0.4}, {4, -1.1}, {5, 0.6}, {6, 1.3},
              {7, -0.2}, {8, 0.9}, {9, 0.1}, {10, -0.5}};
  for (auto _ : state) {
    auto table = forward_table(g, {2, 4}, 5, LowerOrderModel::ZERO);
    benchmark::DoNotOptimize(recover_germ(table, 5, LowerOrderModel::ZERO));
  }
}
BENCHMARK(bm_forward_recover);

void bm_assemble(benchmark::State& state) {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  const int n = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(scene, {10.0, 0.1}, n));
}
BENCHMARK(bm_assemble)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_log_det(benchmark::State& state) {
  BoundaryScene scene = BoundaryScene::mirror_pair(make_two_disk(1.0, 2.0));
  const int n = int(state.range(0));
  NystromOperator op = assemble(scene, {10.0, 0.1}, n);
  for (auto _ : state) benchmark::DoNotOptimize(log_det(op));
}
BENCHMARK(bm_log_det)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
