#include <benchmark/benchmark.h>

#include "tfqkd/fock.hpp"

namespace {

using tfqkd::fock::cplx;

void BM_CoherentBuild(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfqkd::fock::coherent(cplx{0.05, 0.01}, 8));
  }
}
BENCHMARK(BM_CoherentBuild);

void BM_BeamSplitterTwoMode(benchmark::State& state) {
  const auto in = tfqkd::fock::tensor(tfqkd::fock::coherent(cplx{0.05, 0.0}, 8),
                                      tfqkd::fock::coherent(cplx{0.0, 0.05}, 8));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfqkd::fock::beam_splitter(in, 0, 1));
  }
}
BENCHMARK(BM_BeamSplitterTwoMode);

void BM_LossChannel(benchmark::State& state) {
  const auto in = tfqkd::fock::tensor(tfqkd::fock::number_state(3, 6),
                                      tfqkd::fock::number_state(2, 6));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfqkd::fock::loss_channel(in, 0, 0.31));
  }
}
BENCHMARK(BM_LossChannel);

}  // namespace
