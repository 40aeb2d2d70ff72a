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

#ifndef TBQ_EXPSIM_HPP
#define TBQ_EXPSIM_HPP

// Monte Carlo model of the counting experiment: pair generation, losses,
// detector efficiency, dark counts, accidental coincidences, preparation phase
// error and switch splitting-ratio drift.

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tbq/qcore.hpp"
#include "tbq/timebin.hpp"
#include "tbq/tomo.hpp"

namespace tbq {

struct NoiseConfig {
  double mean_pairs_per_pulse = 0.028;
  double rep_rate_hz = 2.5e8;
  std::array<double, 2> det_eff{0.57, 0.62};   // detectors behind ports C and D
  std::array<double, 2> dark_cps{40.0, 40.0};
  /// "interferometer" is charged once per output arm and "switch" once per
  /// photon. "residual" is the unitemised pair-level loss of the rest of the
  /// system; its default puts the QST coincidence rate near 0.12 Hz.
  std::map<std::string, double> loss_db{{"interferometer", 2.0}, {"switch", 7.7}, {"residual", 44.0}};
  double accidental_fraction = 0.02;
  double phase_sigma_rad = 0.20;        // preparation phase error on superposition kets
  double splitting_drift_sigma = 0.06;  // DC-bias drift of theta, radians
  double acquisition_s = 2400.0;        // per projector setting
  double coincidence_window_s = 1e-9;
  std::uint64_t seed = 1;

  /// Every stochastic and imperfection term switched off.
  static NoiseConfig noiseless();

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;

  nlohmann::json to_json() const;
  /// Strict: unknown keys are rejected; missing keys keep their defaults.
  static NoiseConfig from_json(const nlohmann::json& j);
  static NoiseConfig load(const std::string& path);
};

double total_loss_db(const NoiseConfig& config);

/// rep_rate * mu * success * eta_C * eta_D * 10^(-loss/10), in Hz.
double coincidence_rate_estimate(const NoiseConfig& config, double success_prob);

/// Single-photon detection rate at detector 0 (C) or 1 (D).
double singles_rate(const NoiseConfig& config, int detector);

/// Coincidences from a dark count on one side meeting a signal photon on the
/// other within the coincidence window.
double dark_coincidence_rate(const NoiseConfig& config);

inline constexpr double kGateSuccessProbability = 1.0 / 9.0;

/// Poisson counts per setting with rate
///   S p_k + accidental_fraction S / dim^2 + dark coincidence rate,
/// S = coincidence_rate_estimate(config, 1/9). Deterministic in rng_seed.
std::vector<CountRecord> sample_counts(const RealVector& true_probs, const NoiseConfig& config, double duration_s,
                                       std::uint64_t rng_seed, int dim = 4);

/// Gaussian jitter of both theta values with splitting_drift_sigma.
SwitchSetting perturb_switch(const SwitchSetting& setting, const NoiseConfig& config, std::mt19937_64& rng);

/// Independent RNG stream for work item `index` under a master seed, so
/// parallel and serial runs draw identical numbers.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t domain = 0);

struct SimulatedRun {
  NoiseConfig config;
  std::string input_label;
  bool exact = false;
  std::vector<CountRecord> records;  // one per setting; empty in exact mode
  RealVector probabilities;          // Born values of true_state
  DensityMatrix true_state;

  /// Exact mode yields the probabilities themselves.
  Observations observations(const ProjectorSet& projs) const;
};

/// Noise-averaged post-selected output of the gate for one input.
DensityMatrix expected_gate_output(const TomographyInput& input, const NoiseConfig& config);

/// Noise-averaged prepared single-qubit state (no gate, no MDA).
DensityMatrix expected_prepared_state(BasisKet k, const NoiseConfig& config);

std::vector<SimulatedRun> simulate_gate_experiment(std::span<const TomographyInput> inputs,
                                                   const NoiseConfig& config, const ProjectorSet& projs,
                                                   bool exact = false);

/// Tomography of a prepared single-qubit input (no gate). `index` selects the
/// RNG stream.
SimulatedRun simulate_input_qst(BasisKet k, const NoiseConfig& config, const ProjectorSet& projs, bool exact,
                                std::uint64_t index);

/// CNOT truth table through the C-Phase gate in complementary bases; rows are
/// normalised counts (or exact probabilities).
Eigen::Matrix4d simulate_truth_table(CnotBasis basis, const NoiseConfig& config, bool exact = false);

}  // namespace tbq

#endif  // TBQ_EXPSIM_HPP
