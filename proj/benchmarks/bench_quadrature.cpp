#include <benchmark/benchmark.h>

#include <cmath>

#include "curvlab/families.hpp"
#include "curvlab/quadrature.hpp"

using namespace curvlab;

static void BM_OscillatoryTotal(benchmark::State& state) {
  const double i = static_cast<double>(state.range(0));
  const auto fam =
      radial::ExampleFamily::make(radial::FamilyKind::C10, {.n = 3, .i = i, .r0 = 1.0});
  quad::QuadratureSettings qs;
  qs.abs_tol = 1e-9;
  qs.max_evaluations = 50000000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial::family_total(fam, qs).value);
  }
}
BENCHMARK(BM_OscillatoryTotal)->Arg(10)->Arg(100)->Arg(400);

static void BM_GaussianMomentRecurrence(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial::gaussian_moment(6, 10.0, 1.0));
  }
}
BENCHMARK(BM_GaussianMomentRecurrence);

static void BM_FamilyJet(benchmark::State& state) {
  const auto fam =
      radial::ExampleFamily::make(radial::FamilyKind::C21, {.n = 3, .i = 50.0});
  double r = 0.0;
  const double sup = fam.support_radius();
  for (auto _ : state) {
    r += 1e-3;
    if (r > sup) r = 0.0;
    benchmark::DoNotOptimize(fam.factor_jet(r));
  }
}
BENCHMARK(BM_FamilyJet);

BENCHMARK_MAIN();
