#include <cmath>

#include <benchmark/benchmark.h>

#include "wavelab/inequality_lab.hpp"

using namespace wavelab;

namespace {
const KernelParams kAdmissible{-0.125, 0.125, 0.5, 4.0 / 3.0, 4.0};

GridFunction1D gaussian(std::size_t n) {
  return GridFunction1D::sample(16.0, n, [](double x) { return std::exp(-(x - 3) * (x - 3)); });
}
}  // namespace

static void BM_FracIntegral(benchmark::State& state) {
  const auto g = gaussian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(frac_integral(g, kAdmissible));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FracIntegral)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

// Assembly once, then repeated applications.
static void BM_FracIntegralOperatorApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FracIntegralOperator op(16.0, n, kAdmissible);
  const auto g = gaussian(n);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(g));
}
BENCHMARK(BM_FracIntegralOperatorApply)->Arg(512)->Arg(2048);

static void BM_SingularCell(benchmark::State& state) {
  double u = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(singular_cell_integral(0.0, 1.0, u, 0.5, 0.125));
    u = u < 0.9 ? u + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_SingularCell);

BENCHMARK_MAIN();
