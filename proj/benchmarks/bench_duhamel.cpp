#include <benchmark/benchmark.h>

#include "wavelab/exponents.hpp"
#include "wavelab/iteration.hpp"
#include "wavelab/radial_kernel.hpp"

using namespace wavelab;

static void BM_DuhamelConeBump(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const Grid g = Grid::from_extent(3.0, cells, 3.0, cells);
  const auto F = cone_bump({1.0, 2.0, 0.25, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(duhamel_radial(F, 3, g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DuhamelConeBump)->RangeMultiplier(2)->Range(50, 400)->Unit(benchmark::kMillisecond)->Complexity();

// Sampled forcing goes through the bilinear path, as in the Picard loop.
static void BM_DuhamelSampled(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  const Grid g = Grid::from_extent(40.0, cells, 40.0, cells);
  const auto F = RadialForcing::from_field(john_forcing(g, 2.6));
  for (auto _ : state) benchmark::DoNotOptimize(duhamel_radial(F, 3, g));
}
BENCHMARK(BM_DuhamelSampled)->Arg(80)->Arg(160)->Unit(benchmark::kMillisecond);

static void BM_PicardIterate(benchmark::State& state) {
  CauchyProblem pb;
  pb.eps = 0.1;
  pb.nonlinearity = Nonlinearity::absolute(2.5);
  pb.gamma = weight_window(3, 2.5).midpoint();
  pb.t_max = 6.0;
  pb.cells_per_unit = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(picard_iterate(pb));
}
BENCHMARK(BM_PicardIterate)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
