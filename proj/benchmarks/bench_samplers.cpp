#include <benchmark/benchmark.h>

#include "driftlab/durations.hpp"
#include "driftlab/inference.hpp"
#include "driftlab/kernels.hpp"

using namespace driftlab;

static void BM_Fgn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_fgn({0.9, n}, RandomStream{1, 0}.substream(i++)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fgn)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

static void BM_Acd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const AcdParams params{0.05, 0.6, 0.35, InnovationSpec::exponential()};
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_acd(params, n, kDefaultAcdBurnin, RandomStream{2, 0}.substream(i++)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Acd)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

static void BM_Lmsd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LmsdParams params{0.9, SigmaFunction::exponential(), InnovationSpec::exponential()};
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_lmsd(params, n, RandomStream{3, 0}.substream(i++)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Lmsd)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

static void BM_Stable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_stable_skewed(1.4, 1.0, n, RandomStream{4, 0}.substream(i++)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stable)->Arg(1 << 14);

static void BM_AcdTailIndex(benchmark::State& state) {
  const AcdParams params{0.05, 0.6, 0.35, InnovationSpec::exponential()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(acd_tail_index(params));
  }
}
BENCHMARK(BM_AcdTailIndex);

static void BM_Hill(benchmark::State& state) {
  const AcdParams params{0.05, 0.6, 0.35, InnovationSpec::exponential()};
  const auto sample = simulate_acd(params, 1'000'000, kDefaultAcdBurnin, RandomStream{5, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(hill_estimator(sample.durations, 5000));
  }
}
BENCHMARK(BM_Hill);

BENCHMARK_MAIN();
