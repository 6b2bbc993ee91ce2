#include <benchmark/benchmark.h>

#include "covsieve/q5.hpp"

namespace {

void BM_EnumerateBase(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(covsieve::q5::enumerate_base());
  }
}
BENCHMARK(BM_EnumerateBase)->Unit(benchmark::kMillisecond);

void BM_CanonicalReduce(benchmark::State& state) {
  covsieve::q5::Q5Config config;
  // a deliberately non-canonical choice
  config.set(0, {2, 4, 0, 0});
  config.set(1, {1, 0, 6, 0});
  config.set(2, {0, 3, 5, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(covsieve::q5::canonical_reduce(config));
  }
}
BENCHMARK(BM_CanonicalReduce);

}  // namespace
