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

#include "tbq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tbq/errors.hpp"
#include "tbq/matrix_json.hpp"

namespace tbq {

namespace {

void require_unit_interval(double v, const char* who) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, std::string(who) + ": value " + std::to_string(v) + " outside [0, 1]");
  }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double uhlmann(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix root = psd_sqrt(a);
  const ComplexMatrix inner = hermitian_part(root * b * root);
  const double t = psd_sqrt(inner).trace().real();
  return clamp01(t * t);
}

bool is_rank_one(const ComplexMatrix& m) {
  const RealVector ev = hermitian_eig(m).values;
  return ev.size() < 2 || std::abs(ev[1]) <= 1e-10 * std::max(1.0, std::abs(ev[0]));
}

}  // namespace

double state_fidelity(const DensityMatrix& rho, const ComplexVector& target) {
  if (target.size() != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "state and target dimensions differ");
  const double n = target.squaredNorm();
  if (!(n > 0.0)) throw Error(ErrorKind::ZeroParameter, "zero target ket");
  return clamp01(target.dot(rho.matrix() * target).real() / n);
}

double state_fidelity(const DensityMatrix& rho, const DensityMatrix& target) {
  if (target.dim() != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "state and target dimensions differ");
  return uhlmann(rho.matrix(), target.matrix());
}

double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& chi_ideal) {
  if (chi.dim() != chi_ideal.dim() || chi.basis_ordering() != chi_ideal.basis_ordering()) {
    throw Error(ErrorKind::BasisMismatch, "process matrices use different bases");
  }
  if (is_rank_one(chi_ideal.chi())) return clamp01((chi_ideal.chi() * chi.chi()).trace().real());
  return uhlmann(chi_ideal.chi(), nearest_psd(chi.chi()));
}

double average_gate_fidelity(double process_fidelity) {
  require_unit_interval(process_fidelity, "average_gate_fidelity");
  return (4.0 * process_fidelity + 1.0) / 5.0;
}

double entangling_capability(double process_fidelity) {
  require_unit_interval(process_fidelity, "entangling_capability");
  return std::max(0.0, 2.0 * process_fidelity - 1.0);
}

double logic_fidelity(const Eigen::Matrix4d& truth_table, const Eigen::Matrix4d& ideal_permutation) {
  if (!truth_table.allFinite() || (truth_table.array() < 0.0).any()) {
    throw Error(ErrorKind::MalformedTable, "truth table entries must be finite and non-negative");
  }
  for (int r = 0; r < 4; ++r) {
    if (std::abs(truth_table.row(r).sum() - 1.0) > 1e-9) {
      throw Error(ErrorKind::MalformedTable, "row " + std::to_string(r) + " does not sum to one");
    }
    if (std::abs(ideal_permutation.row(r).sum() - 1.0) > 1e-12) {
      throw Error(ErrorKind::MalformedTable, "ideal table is not a permutation");
    }
  }
  return truth_table.cwiseProduct(ideal_permutation).sum() / 4.0;
}

FidelityBounds hofmann_bounds(double f_zz, double f_xx) {
  require_unit_interval(f_zz, "hofmann_bounds");
  require_unit_interval(f_xx, "hofmann_bounds");
  return {f_zz + f_xx - 1.0, std::min(f_zz, f_xx)};
}

double chsh_max(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "chsh_max needs a two-qubit state");
  const std::array<ComplexMatrix, 3> sigma{pauli::X(), pauli::Y(), pauli::Z()};
  Eigen::Matrix3d t;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      t(a, b) = (rho.matrix() * tensor_product(sigma[a], sigma[b])).trace().real();
    }
  }
  const Eigen::Vector3d s = Eigen::JacobiSVD<Eigen::Matrix3d>(t).singularValues();
  return 2.0 * std::sqrt(s[0] * s[0] + s[1] * s[1]);
}

GateReport GateReport::from_process_fidelity(double f_p) {
  GateReport r;
  r.process_fidelity = f_p;
  r.average_fidelity = average_gate_fidelity(f_p);
  r.entangling_capability = tbq::entangling_capability(f_p);
  return r;
}

GateReport GateReport::from_logic_fidelities(double f_zz, double f_xx) {
  const FidelityBounds bounds = hofmann_bounds(f_zz, f_xx);
  const double lower = std::max(0.0, bounds.lower);
  GateReport r = from_process_fidelity(lower);
  r.logic_fidelities = LogicFidelities{f_zz, f_xx};
  r.cnot_bounds = bounds;
  r.cnot_entangling_capability = tbq::entangling_capability(lower);
  return r;
}

nlohmann::json GateReport::to_json() const {
  nlohmann::json j;
  j["process_fidelity"] = round_significant(process_fidelity);
  j["average_fidelity"] = round_significant(average_fidelity);
  j["entangling_capability"] = round_significant(entangling_capability);
  if (raw_process_fidelity) j["raw_process_fidelity"] = round_significant(*raw_process_fidelity);
  if (input_process_fidelity) j["input_process_fidelity"] = round_significant(*input_process_fidelity);
  if (process_fidelity_stddev) j["process_fidelity_stddev"] = round_significant(*process_fidelity_stddev);
  if (raw_process_fidelity_stddev) j["raw_process_fidelity_stddev"] = round_significant(*raw_process_fidelity_stddev);
  if (logic_fidelities) {
    j["logic_fidelity_zz"] = round_significant(logic_fidelities->zz);
    j["logic_fidelity_xx"] = round_significant(logic_fidelities->xx);
  }
  if (cnot_bounds) {
    j["cnot_fidelity_lower"] = round_significant(cnot_bounds->lower);
    j["cnot_fidelity_upper"] = round_significant(cnot_bounds->upper);
  }
  if (cnot_entangling_capability) j["cnot_entangling_capability"] = round_significant(*cnot_entangling_capability);
  return j;
}

}  // namespace tbq
