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
#include <vector>

#include <benchmark/benchmark.h>

#include "tbq/expsim.hpp"
#include "tbq/tomo.hpp"

namespace {

using namespace tbq;

Observations noisy_observations(const ProjectorSet& p, std::uint64_t seed) {
  NoiseConfig c;
  c.seed = seed;
  const auto runs = simulate_gate_experiment(tomography_input_set(), c, p);
  return runs[10].observations(p);
}

void BM_QstLinearInversion(benchmark::State& state) {
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  const Observations obs = noisy_observations(p, 1);
  for (auto _ : state) benchmark::DoNotOptimize(qst_linear_inversion(obs, p));
}
BENCHMARK(BM_QstLinearInversion);

void BM_QstMle(benchmark::State& state) {
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  const Observations obs = noisy_observations(p, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qst_mle(obs, p));
}
BENCHMARK(BM_QstMle)->Unit(benchmark::kMillisecond);

std::vector<DensityMatrix> noisy_outputs() {
  NoiseConfig c;
  std::vector<DensityMatrix> out;
  for (const auto& in : tomography_input_set()) out.push_back(expected_gate_output(in, c));
  return out;
}

void BM_QptLinearInversion(benchmark::State& state) {
  const auto outputs = noisy_outputs();
  for (auto _ : state) benchmark::DoNotOptimize(qpt_linear_inversion(outputs));
}
BENCHMARK(BM_QptLinearInversion)->Unit(benchmark::kMillisecond);

void BM_QptMle(benchmark::State& state) {
  const auto outputs = noisy_outputs();
  for (auto _ : state) benchmark::DoNotOptimize(qpt_mle(outputs));
}
BENCHMARK(BM_QptMle)->Unit(benchmark::kMillisecond);

void BM_ChiToSuperoperatorRoundTrip(benchmark::State& state) {
  const ProcessMatrix chi = chi_cphase_ideal();
  for (auto _ : state) benchmark::DoNotOptimize(superoperator_to_chi(chi_to_superoperator(chi), 4));
}
BENCHMARK(BM_ChiToSuperoperatorRoundTrip);

void BM_Deconvolve(benchmark::State& state) {
  ComplexMatrix dep = ComplexMatrix::Zero(16, 16);
  dep(0, 0) = 0.985;
  for (int i = 1; i < 16; ++i) dep(i, i) = 0.015 / 15.0;
  const ProcessMatrix input = ProcessMatrix::from_matrix(dep, 4);
  const ProcessMatrix total = compose_processes(chi_cphase_ideal(), input);
  for (auto _ : state) benchmark::DoNotOptimize(deconvolve_input_imperfection(total, input));
}
BENCHMARK(BM_Deconvolve);

}  // namespace
