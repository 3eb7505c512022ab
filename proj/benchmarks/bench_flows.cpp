#include <benchmark/benchmark.h>

#include "curvlab/flows.hpp"

using namespace curvlab::flows;

static void BM_CurvatureFromGrid2D(benchmark::State& state) {
  PeriodicGrid grid{2, static_cast<int>(state.range(0)), 1.0};
  const auto g = perturbed_flat_metric(grid, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvature_from_grid(g).scalar.v.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.points());
}
BENCHMARK(BM_CurvatureFromGrid2D)->Arg(32)->Arg(64)->Arg(128);

static void BM_CurvatureFromGrid3D(benchmark::State& state) {
  PeriodicGrid grid{3, static_cast<int>(state.range(0)), 1.0};
  const auto g = perturbed_flat_metric(grid, 0.02);
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvature_from_grid(g).scalar.v.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.points());
}
BENCHMARK(BM_CurvatureFromGrid3D)->Arg(16)->Arg(32)->Arg(48);

static void BM_RdeStep2D(benchmark::State& state) {
  PeriodicGrid grid{2, static_cast<int>(state.range(0)), 1.0};
  auto s = make_flow_state(perturbed_flat_metric(grid, 0.05));
  const double dt = 0.9 * cfl_dt(s.g);
  for (auto _ : state) {
    s = rde_step(s, dt);
  }
  state.SetItemsProcessed(state.iterations() * grid.points());
}
BENCHMARK(BM_RdeStep2D)->Arg(32)->Arg(64);

static void BM_HeatStep3D(benchmark::State& state) {
  PeriodicGrid grid{3, 32, 1.0};
  const auto g = perturbed_flat_metric(grid, 0.02);
  auto f = cosine_field(grid, 0.1, 1);
  const double dt = 0.9 * cfl_dt(g);
  for (auto _ : state) {
    f = heat_flow_step(f, g, dt);
  }
  state.SetItemsProcessed(state.iterations() * grid.points());
}
BENCHMARK(BM_HeatStep3D);

BENCHMARK_MAIN();
