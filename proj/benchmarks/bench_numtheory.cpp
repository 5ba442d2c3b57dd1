#include <benchmark/benchmark.h>

#include "diophant/numtheory.hpp"

using namespace diophant;

static void BM_Sieve(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sieve(limit).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sieve)->RangeMultiplier(10)->Range(10000, 10000000)->Unit(benchmark::kMillisecond);

static void BM_FactorRange(benchmark::State& state) {
  const PrimeTable table = sieve(1000000);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    std::size_t total = 0;
    for (std::uint64_t k = 1; k <= n; ++k) total += factor(k, table).factors().size();
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FactorRange)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Primorial(benchmark::State& state) {
  const PrimeTable table = sieve(100000);
  for (auto _ : state) benchmark::DoNotOptimize(primorial(static_cast<std::size_t>(state.range(0)), table));
}
BENCHMARK(BM_Primorial)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
