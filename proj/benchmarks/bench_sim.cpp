// Copyright 2026 The timebin-qpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <benchmark/benchmark.h>

#include "tbq/expsim.hpp"
#include "tbq/timebin.hpp"

namespace {

using namespace tbq;

void BM_CphasePropagation(benchmark::State& state) {
  const TimeBinQubit a = TimeBinQubit::from_ket(BasisKet::plus);
  const TimeBinQubit b = TimeBinQubit::from_ket(BasisKet::L);
  for (auto _ : state) benchmark::DoNotOptimize(cphase_postselected(a, b));
}
BENCHMARK(BM_CphasePropagation);

void BM_ExpectedGateOutput(benchmark::State& state) {
  const NoiseConfig c;
  const TomographyInput in{BasisKet::plus, BasisKet::L};
  for (auto _ : state) benchmark::DoNotOptimize(expected_gate_output(in, c));
}
BENCHMARK(BM_ExpectedGateOutput)->Unit(benchmark::kMillisecond);

void BM_SimulateGateExperiment(benchmark::State& state) {
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  NoiseConfig c;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    c.seed = ++seed;
    benchmark::DoNotOptimize(simulate_gate_experiment(tomography_input_set(), c, p));
  }
}
BENCHMARK(BM_SimulateGateExperiment)->Unit(benchmark::kMillisecond);

}  // namespace
