#include <benchmark/benchmark.h>

#include "diophant/gcd_graph.hpp"

using namespace diophant;

namespace {

const PrimeTable& table() {
  static const PrimeTable t = sieve(100000);
  return t;
}

ToyGraphParams sized(unsigned vertices) {
  ToyGraphParams p;
  p.min_vertices = vertices;
  p.max_vertices = vertices;
  return p;
}

}  // namespace

static void BM_Quality(benchmark::State& state) {
  const ConstantsProfile toy = ConstantsProfile::toy();
  const GcdGraph g = random_toy_graph(11, table(), sized(static_cast<unsigned>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(quality(g, toy).value());
}
BENCHMARK(BM_Quality)->Arg(10)->Arg(40);

static void BM_Compress(benchmark::State& state) {
  const ConstantsProfile toy = ConstantsProfile::toy();
  const auto params = sized(static_cast<unsigned>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const GcdGraph g = random_toy_graph(++seed % 64 + 1, table(), params);
    benchmark::DoNotOptimize(compress(g, 2, toy).trace.steps.size());
  }
}
BENCHMARK(BM_Compress)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

static void BM_BalanceGrid(benchmark::State& state) {
  for (auto _ : state) {
    for (long i = 0; i <= 32; ++i) {
      for (long j = 0; j <= 32; ++j) benchmark::DoNotOptimize(balance_inequality_lhs(Rational(i, 32), Rational(j, 32)));
    }
  }
}
BENCHMARK(BM_BalanceGrid)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
