#include <benchmark/benchmark.h>

#include "covsieve/lp.hpp"
#include "covsieve/q5.hpp"

namespace {

using namespace covsieve;

const char* kWorstCase = "11**, 2*1*, *22*, 121*, 1**1, *3*2, 13*3, **34, 2*31, *232, 1233";

void BM_EvaluateBaseConfig(benchmark::State& state) {
  // a typical base-stage configuration: all-ones choices
  q5::Q5Config config;
  for (int s = 0; s < q5::kBaseSlots; ++s) {
    std::array<std::uint8_t, 4> vals{};
    const int fmask = q5::kFamily[static_cast<std::size_t>(s)];
    for (int c = 0; c < 4; ++c) {
      if (fmask >> c & 1) vals[static_cast<std::size_t>(c)] = 1;
    }
    config.set(s, vals);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(q5::evaluate_config(config));
  }
}
BENCHMARK(BM_EvaluateBaseConfig)->Unit(benchmark::kMillisecond);

void BM_EvaluateWorstCase(benchmark::State& state) {
  const auto config = q5::Q5Config::parse(kWorstCase);
  for (auto _ : state) {
    benchmark::DoNotOptimize(q5::evaluate_config(config));
  }
}
BENCHMARK(BM_EvaluateWorstCase)->Unit(benchmark::kMillisecond);

void BM_SolveFullModel(benchmark::State& state) {
  const auto config = q5::Q5Config::parse(kWorstCase);
  const auto full = q5::build_lp(config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp::solve(full.model));
  }
}
BENCHMARK(BM_SolveFullModel)->Unit(benchmark::kMillisecond);

}  // namespace
