#include <benchmark/benchmark.h>

#include "fbmbt/fgn.hpp"
#include "fbmbt/rng.hpp"

using namespace fbmbt;

static void BM_NormalDraw(benchmark::State& state) {
  RandomStream rng(make_seed(1, 0, StreamTag::noise));
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_NormalDraw);

static void BM_FbmSamplerConstruct(benchmark::State& state) {
  const auto m = state.range(0);
  for (auto _ : state) {
    FbmSampler s(HurstParameter(0.3), 1.0 / 1024, m);
    benchmark::DoNotOptimize(s.min_eigenvalue_ratio());
  }
}
BENCHMARK(BM_FbmSamplerConstruct)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);

static void BM_FbmSample(benchmark::State& state) {
  const auto m = state.range(0);
  const FbmSampler s(HurstParameter(0.3), 1.0 / 1024, m);
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(s.sample(make_seed(1, r++, StreamTag::fbm)).at(1));
  state.SetItemsProcessed(state.iterations() * (2 * m + 1));
}
BENCHMARK(BM_FbmSample)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMicrosecond);

static void BM_BrownianSample(benchmark::State& state) {
  const double spacing = 1.0 / static_cast<double>(state.range(0));
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_bm(1.0, spacing, make_seed(1, r++, StreamTag::brownian)).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BrownianSample)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMicrosecond);
