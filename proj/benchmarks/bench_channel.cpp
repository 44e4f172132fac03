#include <benchmark/benchmark.h>

#include "tfqkd/channel.hpp"

namespace {

void BM_CodeModeRates(benchmark::State& state) {
  tfqkd::channel::PhysicalParams p;
  p.distance_km = 400.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfqkd::channel::code_mode_rates(p.mu[0], 1, p));
  }
}
BENCHMARK(BM_CodeModeRates);

void BM_FockYield(benchmark::State& state) {
  tfqkd::channel::PhysicalParams p;
  p.distance_km = 400.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfqkd::channel::fock_yield_and_bias(2, 1, p));
  }
}
BENCHMARK(BM_FockYield);

}  // namespace
