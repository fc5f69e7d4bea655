#include <benchmark/benchmark.h>

#include "wavelab/inequality_lab.hpp"
#include "wavelab/overlap.hpp"

using namespace wavelab;

static void BM_KernelDomination(benchmark::State& state) {
  const KernelParams adm{-0.125, 0.125, 0.5, 4.0 / 3.0, 4.0};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_domination_2d(n, adm, 9));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KernelDomination)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_OverlapBound(benchmark::State& state) {
  const auto op = BandedBlockOperator::random(1, static_cast<std::size_t>(state.range(0)), 8, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(overlap_bound(op));
}
BENCHMARK(BM_OverlapBound)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
