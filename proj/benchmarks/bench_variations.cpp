#include <benchmark/benchmark.h>

#include "fbmbt/calculus.hpp"
#include "fbmbt/variations.hpp"

using namespace fbmbt;

namespace {

struct Fixture {
  FbmPath x;
  SkeletalStructure sk;
  std::size_t steps;
};

Fixture make_fixture(int n) {
  const std::int64_t reach = 8 * (std::int64_t{1} << (n / 2));
  Fixture f{sample_fbm_two_sided(HurstParameter(0.3), std::exp2(-0.5 * n), reach, make_seed(5, 0, StreamTag::fbm)),
            {}, steps_for_horizon(n, 1.0)};
  f.sk.level = n;
  f.sk.walk = sample_walk_positions(f.steps, make_seed(5, 0, StreamTag::walk));
  f.sk.times.assign(f.sk.walk.size(), 0.0);
  return f;
}

}  // namespace

static void BM_VariationDirect(benchmark::State& state) {
  const auto fx = make_fixture(static_cast<int>(state.range(0)));
  const auto z = skeletal_z_values(fx.x, fx.sk, fx.steps);
  const auto f = SmoothFunction::sine();
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_variation_direct(f, z, 3));
}
BENCHMARK(BM_VariationDirect)->DenseRange(8, 14, 2)->Unit(benchmark::kMicrosecond);

static void BM_VariationSkeletal(benchmark::State& state) {
  const auto fx = make_fixture(static_cast<int>(state.range(0)));
  const auto counts = crossing_counts(fx.sk.walk, fx.steps, fx.sk.level);
  const auto f = SmoothFunction::sine();
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_variation_skeletal(f, fx.x, counts, 3));
}
BENCHMARK(BM_VariationSkeletal)->DenseRange(8, 14, 2)->Unit(benchmark::kMicrosecond);

static void BM_HermiteProfile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto fx = make_fixture(n);
  const auto f = SmoothFunction::sine();
  const std::int64_t steps = 2 * (std::int64_t{1} << (n / 2));
  for (auto _ : state) benchmark::DoNotOptimize(hermite_variation_profile(f, fx.x, n, 3, steps).plus.back());
}
BENCHMARK(BM_HermiteProfile)->DenseRange(8, 14, 2)->Unit(benchmark::kMicrosecond);

static void BM_TaylorAssembly(benchmark::State& state) {
  const auto fx = make_fixture(static_cast<int>(state.range(0)));
  const auto z = skeletal_z_values(fx.x, fx.sk, fx.steps);
  const auto f = SmoothFunction::sine();
  for (auto _ : state) benchmark::DoNotOptimize(taylor_assembly(f, z).total);
}
BENCHMARK(BM_TaylorAssembly)->DenseRange(8, 12, 2)->Unit(benchmark::kMicrosecond);
