#include <benchmark/benchmark.h>

#include "fbmbt/skeleton.hpp"

using namespace fbmbt;

static void BM_BuildSkeleton(benchmark::State& state, RefinementMode mode) {
  const int n = static_cast<int>(state.range(0));
  const BmPath y = sample_bm(1.5, std::exp2(-n - 2), make_seed(2, 0, StreamTag::brownian));
  for (auto _ : state) benchmark::DoNotOptimize(build_skeleton(y, n, mode).steps());
}
BENCHMARK_CAPTURE(BM_BuildSkeleton, bridge, RefinementMode::bridge)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BuildSkeleton, naive, RefinementMode::naive)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

static void BM_ExactWalk(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t r = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_walk_exact(n, steps_for_horizon(n, 1.0), make_seed(3, r++, StreamTag::walk)).steps());
}
BENCHMARK(BM_ExactWalk)->DenseRange(8, 14, 2)->Unit(benchmark::kMicrosecond);

static void BM_CrossingCounts(benchmark::State& state) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  const auto walk = sample_walk_positions(steps, make_seed(4, 0, StreamTag::walk));
  for (auto _ : state) benchmark::DoNotOptimize(crossing_counts(walk, steps, 1).terminal);
}
BENCHMARK(BM_CrossingCounts)->RangeMultiplier(4)->Range(1 << 8, 1 << 16);
