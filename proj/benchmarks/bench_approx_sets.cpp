#include <benchmark/benchmark.h>

#include <numeric>

#include "diophant/approx_sets.hpp"

using namespace diophant;

namespace {

const PrimeTable& table() {
  static const PrimeTable t = sieve(1000000);
  return t;
}

}  // namespace

static void BM_BuildAq(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const Rational d = make_rational(1, static_cast<long long>(4 * q));
  for (auto _ : state) benchmark::DoNotOptimize(build_Aq(q, d, true).size());
}
BENCHMARK(BM_BuildAq)->RangeMultiplier(10)->Range(100, 100000);

// Lattice counting against interval intersection on the same pairs.
static void BM_PairIntersection(benchmark::State& state) {
  const bool generic = state.range(1) != 0;
  const auto r = static_cast<std::uint64_t>(state.range(0));
  const std::uint64_t q = r / 3 + 1;
  const Rational dq = make_rational(1, static_cast<long long>(8 * q));
  const Rational dr = make_rational(1, static_cast<long long>(8 * r));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generic ? reduced_pair_intersection_generic(q, dq, r, dr)
                                     : reduced_pair_intersection(q, dq, r, dr));
  }
}
BENCHMARK(BM_PairIntersection)->ArgsProduct({{1000, 10000, 100000}, {0, 1}});

static void BM_PairData(benchmark::State& state) {
  std::vector<std::uint64_t> support(499);
  std::iota(support.begin(), support.end(), 2);
  const DeltaSequence d = delta_uniform_support(support, 20);
  for (auto _ : state) {
    for (std::uint64_t q = 2; q <= 40; ++q) {
      for (std::uint64_t r = 460; r <= 500; ++r) benchmark::DoNotOptimize(pair_data(q, r, d, table()));
    }
  }
}
BENCHMARK(BM_PairData)->Unit(benchmark::kMillisecond);

static void BM_Khinchin(benchmark::State& state) {
  const auto qmax = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(delta_khinchin(1, qmax).entries().size());
}
BENCHMARK(BM_Khinchin)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const DeltaSequence d = delta_khinchin(1, 100000);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_counts(d, true, 2000, 7, table(), threads).mean);
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_WindowReport(benchmark::State& state) {
  const DeltaSequence d = delta_khinchin(1, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(window_report(d, 200, 260, table()).cs_bound);
}
BENCHMARK(BM_WindowReport)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
