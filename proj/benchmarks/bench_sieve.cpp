#include <benchmark/benchmark.h>

#include "covsieve/medium.hpp"
#include "covsieve/sieve.hpp"

namespace {

using namespace covsieve;

void BM_SieveRun(benchmark::State& state) {
  const Box box({4, 6, 8, 10, 12});
  Configuration config;
  config.insert(parse_hyperplane("11***", box));
  config.insert(parse_hyperplane("2*3**", box));
  config.insert(parse_hyperplane("*44**", box));
  config.insert(parse_hyperplane("1*2*5", box));
  config.insert(parse_hyperplane("**777", box));
  const std::vector<double> deltas(5, 0.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sieve<double>(box, config, deltas, 0));
  }
}
BENCHMARK(BM_SieveRun)->Unit(benchmark::kMillisecond);

void BM_OptimizeDeltas(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(medium::optimize_deltas(1.0, 9.769075));
  }
}
BENCHMARK(BM_OptimizeDeltas)->Unit(benchmark::kMillisecond);

}  // namespace
