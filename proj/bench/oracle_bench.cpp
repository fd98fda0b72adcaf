// Serial reference vs OpenMP enumeration in the brute-force oracle.
#include <benchmark/benchmark.h>

#include <random>

#include "idq/generators.hpp"
#include "idq/oracle.hpp"

namespace {

// True instances force the full 2^n enumeration.
idq::PrenexFormula workload(unsigned n) { return idq::gen::equality(n); }

void BM_OracleSerial(benchmark::State& state) {
  auto f = workload(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(idq::oracle::decide_2qbf_serial(f));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

void BM_OracleParallel(benchmark::State& state) {
  auto f = workload(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(idq::oracle::decide_2qbf_parallel(f));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

}  // namespace

BENCHMARK(BM_OracleSerial)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
