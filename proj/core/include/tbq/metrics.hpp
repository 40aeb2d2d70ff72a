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

#ifndef TBQ_METRICS_HPP
#define TBQ_METRICS_HPP

#include <optional>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "tbq/qcore.hpp"
#include "tbq/tomo.hpp"

namespace tbq {

/// <psi|rho|psi> for a pure target (normalised internally).
double state_fidelity(const DensityMatrix& rho, const ComplexVector& target);
/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& target);

/// Tr(chi_ideal chi) when the ideal process is rank one, Uhlmann fidelity of
/// the two chi matrices otherwise. Throws BasisMismatch.
double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& chi_ideal);

/// (4 F_p + 1) / 5 for two qubits. Throws OutOfRange.
double average_gate_fidelity(double process_fidelity);

/// Lower bound max(0, 2 F_p - 1). Throws OutOfRange.
double entangling_capability(double process_fidelity);

/// Mean probability on the ideal output. Rows must sum to one. Throws
/// MalformedTable.
double logic_fidelity(const Eigen::Matrix4d& truth_table, const Eigen::Matrix4d& ideal_permutation);

struct FidelityBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// F_zz + F_xx - 1 <= F <= min(F_zz, F_xx). Throws OutOfRange.
FidelityBounds hofmann_bounds(double f_zz, double f_xx);

/// Horodecki maximum CHSH value 2 sqrt(s1^2 + s2^2) of a two-qubit state.
double chsh_max(const DensityMatrix& rho);

struct LogicFidelities {
  double zz = 0.0;
  double xx = 0.0;
};

struct GateReport {
  double process_fidelity = 0.0;
  double average_fidelity = 0.0;
  double entangling_capability = 0.0;

  std::optional<double> raw_process_fidelity;    // before input compensation
  std::optional<double> input_process_fidelity;  // chi_input vs ideal gate
  std::optional<double> process_fidelity_stddev;
  std::optional<double> raw_process_fidelity_stddev;

  std::optional<LogicFidelities> logic_fidelities;
  std::optional<FidelityBounds> cnot_bounds;
  std::optional<double> cnot_entangling_capability;  // from the lower bound

  static GateReport from_process_fidelity(double f_p);
  static GateReport from_logic_fidelities(double f_zz, double f_xx);

  /// Flat JSON object; absent optionals are omitted.
  nlohmann::json to_json() const;
};

}  // namespace tbq

#endif  // TBQ_METRICS_HPP
