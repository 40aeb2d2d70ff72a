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

#include "tbq/cli/pipeline.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "tbq/errors.hpp"

namespace tbq::cli {

namespace {

std::vector<DensityMatrix> product_inputs(std::span<const DensityMatrix> prepared) {
  std::vector<DensityMatrix> out;
  out.reserve(16);
  for (const auto& a : prepared) {
    for (const auto& b : prepared) {
      out.push_back(DensityMatrix::from_matrix(hermitian_part(tensor_product(a.matrix(), b.matrix()))));
    }
  }
  return out;
}

}  // namespace

DensityMatrix reconstruct_state(const Observations& data, const ProjectorSet& projs, bool exact) {
  if (exact) return DensityMatrix::from_matrix(nearest_density(qst_linear_inversion(data, projs)));
  return qst_mle(data, projs);
}

QptEstimates estimate_processes(std::span<const DensityMatrix> outputs, std::span<const DensityMatrix> prepared) {
  if (prepared.size() != kInputKets.size()) {
    throw Error(ErrorKind::IncompleteInputSet, "expected 4 prepared single-qubit states");
  }
  LinearProcessEstimate linear = qpt_linear_inversion(outputs);
  const auto& inputs = tomography_input_set();
  std::vector<InputOutputPair> pairs;
  for (std::size_t j = 0; j < outputs.size(); ++j) pairs.push_back({inputs[j].state().matrix(), outputs[j].matrix()});
  ProcessMleResult raw = qpt_mle_detailed(pairs);
  const std::vector<DensityMatrix> measured = product_inputs(prepared);
  ProcessMatrix chi_input = build_chi_input(measured);
  ProcessMatrix chi_cphase = deconvolve_input_imperfection(raw.chi, input_error_channel(chi_input));
  return {std::move(raw.objective), std::move(linear.chi), std::move(raw.chi), std::move(chi_input),
          std::move(chi_cphase)};
}

QptPipelineResult run_qpt_pipeline(const NoiseConfig& config, bool exact, const ProjectorSet& two_qubit,
                                   const ProjectorSet& one_qubit) {
  const auto& inputs = tomography_input_set();
  std::vector<SimulatedRun> gate_runs = simulate_gate_experiment(inputs, config, two_qubit, exact);
  std::vector<SimulatedRun> input_runs;
  for (std::size_t i = 0; i < kInputKets.size(); ++i) {
    input_runs.push_back(simulate_input_qst(kInputKets[i], config, one_qubit, exact, i));
  }

  std::vector<std::vector<double>> objectives;
  std::vector<DensityMatrix> outputs;
  auto reconstruct = [&](const SimulatedRun& run, const ProjectorSet& projs) {
    if (exact) return reconstruct_state(run.observations(projs), projs, true);
    StateMleResult mle = qst_mle_detailed(run.observations(projs), projs);
    spdlog::debug("state {}: {} iterations", run.input_label, mle.iterations);
    objectives.push_back(std::move(mle.log_likelihood));
    return std::move(mle.state);
  };
  for (const auto& run : gate_runs) outputs.push_back(reconstruct(run, two_qubit));
  std::vector<DensityMatrix> prepared;
  for (const auto& run : input_runs) prepared.push_back(reconstruct(run, one_qubit));

  QptEstimates est = estimate_processes(outputs, prepared);
  objectives.push_back(std::move(est.raw_objective));
  const ProcessMatrix ideal = chi_cphase_ideal();
  const double f_raw = process_fidelity(est.chi_raw, ideal);
  const double f_input = process_fidelity(est.chi_input, ideal);
  const double f_cphase = process_fidelity(est.chi_cphase, ideal);
  spdlog::info("process fidelity raw {:.4f}, input {:.4f}, compensated {:.4f}", f_raw, f_input, f_cphase);
  return {std::move(gate_runs), std::move(input_runs), std::move(outputs),     std::move(prepared),
          std::move(objectives), std::move(est.chi_linear), std::move(est.chi_raw), std::move(est.chi_input),
          std::move(est.chi_cphase), f_raw, f_input, f_cphase};
}

QptBootstrap bootstrap_qpt(const QptPipelineResult& result, int replicas, std::uint64_t seed,
                           const ProjectorSet& two_qubit, const ProjectorSet& one_qubit) {
  std::vector<Observations> data;
  for (const auto& run : result.gate_runs) data.push_back(run.observations(two_qubit));
  for (const auto& run : result.input_runs) data.push_back(run.observations(one_qubit));
  const std::size_t n_gate = result.gate_runs.size();
  const ProcessMatrix ideal = chi_cphase_ideal();

  std::vector<double> cphase_replicas;
  BootstrapSummary raw = parametric_bootstrap(data, replicas, seed, [&](std::span<const Observations> sample) {
    std::vector<DensityMatrix> outputs;
    std::vector<DensityMatrix> prepared;
    for (std::size_t k = 0; k < sample.size(); ++k) {
      if (k < n_gate) {
        outputs.push_back(qst_mle(sample[k], two_qubit));
      } else {
        prepared.push_back(qst_mle(sample[k], one_qubit));
      }
    }
    const QptEstimates est = estimate_processes(outputs, prepared);
    cphase_replicas.push_back(process_fidelity(est.chi_cphase, ideal));
    return process_fidelity(est.chi_raw, ideal);
  });

  BootstrapSummary cphase;
  cphase.replicas = std::move(cphase_replicas);
  const double n = static_cast<double>(cphase.replicas.size());
  for (double v : cphase.replicas) cphase.mean += v / n;
  double ss = 0.0;
  for (double v : cphase.replicas) ss += (v - cphase.mean) * (v - cphase.mean);
  cphase.stddev = std::sqrt(ss / (n - 1.0));
  return {std::move(raw), std::move(cphase)};
}

}  // namespace tbq::cli
