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

#ifndef TBQ_CLI_PIPELINE_HPP
#define TBQ_CLI_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tbq/expsim.hpp"
#include "tbq/metrics.hpp"
#include "tbq/tomo.hpp"

namespace tbq::cli {

/// Per-qubit kets whose products form tomography_input_set().
inline constexpr std::array<BasisKet, 4> kInputKets{BasisKet::t1, BasisKet::t2, BasisKet::plus, BasisKet::L};

/// Exact (infinite-statistics) data carries no sampling noise, so the
/// unconstrained inversion is already the state and is used directly; counts
/// go through maximum likelihood.
DensityMatrix reconstruct_state(const Observations& data, const ProjectorSet& projs, bool exact);

/// Everything the gate-characterisation run produces, in pipeline order.
struct QptPipelineResult {
  std::vector<SimulatedRun> gate_runs;      // 16, ordered as tomography_input_set()
  std::vector<SimulatedRun> input_runs;     // 4, ordered as kInputKets
  std::vector<DensityMatrix> outputs;       // MLE of each gate run
  std::vector<DensityMatrix> prepared;      // MLE of each input run
  std::vector<std::vector<double>> mle_objectives;  // state MLEs (counts only), then chi_raw
  ProcessMatrix chi_linear;                 // unconstrained inversion of the outputs
  ProcessMatrix chi_raw;                    // physical chi of the gate as measured
  ProcessMatrix chi_input;                  // ideal gate after measured preparation
  ProcessMatrix chi_cphase;                 // gate with input imperfection removed
  double raw_fidelity = 0.0;
  double input_fidelity = 0.0;
  double cphase_fidelity = 0.0;
};

/// Raw chi, input chi and deconvolved chi from already-reconstructed states.
struct QptEstimates {
  std::vector<double> raw_objective;
  ProcessMatrix chi_linear;
  ProcessMatrix chi_raw;
  ProcessMatrix chi_input;
  ProcessMatrix chi_cphase;
};

QptEstimates estimate_processes(std::span<const DensityMatrix> outputs, std::span<const DensityMatrix> prepared);

/// Simulate, reconstruct and deconvolve under one noise configuration.
QptPipelineResult run_qpt_pipeline(const NoiseConfig& config, bool exact,
                                   const ProjectorSet& two_qubit = ProjectorSet::overcomplete(2),
                                   const ProjectorSet& one_qubit = ProjectorSet::overcomplete(1));

struct QptBootstrap {
  BootstrapSummary raw;
  BootstrapSummary cphase;
};

/// Poisson resampling of every gate and input-tomography record.
QptBootstrap bootstrap_qpt(const QptPipelineResult& result, int replicas, std::uint64_t seed,
                           const ProjectorSet& two_qubit = ProjectorSet::overcomplete(2),
                           const ProjectorSet& one_qubit = ProjectorSet::overcomplete(1));

}  // namespace tbq::cli

#endif  // TBQ_CLI_PIPELINE_HPP
