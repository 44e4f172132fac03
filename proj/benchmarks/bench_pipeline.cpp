#include <benchmark/benchmark.h>

#include "tfqkd/keyrate.hpp"
#include "tfqkd/protosim.hpp"

namespace {

void BM_AsymptoticKeyRate(benchmark::State& state) {
  tfqkd::channel::PhysicalParams p;
  p.distance_km = 500.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfqkd::keyrate::asymptotic_key_rate(0, 1, p));
  }
}
BENCHMARK(BM_AsymptoticKeyRate);

void BM_BatchedSimulate(benchmark::State& state) {
  tfqkd::channel::PhysicalParams p;
  p.distance_km = 100.0;
  p.p_test = 0.2;
  p.p_zc = 0.8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tfqkd::sim::simulate(p, 1e9, 7, tfqkd::sim::Sampler::Batched, 2));
  }
}
BENCHMARK(BM_BatchedSimulate);

}  // namespace
