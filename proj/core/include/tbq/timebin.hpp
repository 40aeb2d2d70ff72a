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

#ifndef TBQ_TIMEBIN_HPP
#define TBQ_TIMEBIN_HPP

// Time-bin qubits, the 2x2 switch acting as a time-dependent beam splitter,
// the mode-dependent attenuator and coincidence post-selection.
//
// Two-qubit basis ordering is (t1t1, t1t2, t2t1, t2t2) with the control photon
// (input port A, output port C) as the first factor.

#include <array>
#include <compare>
#include <map>
#include <string_view>
#include <utility>

#include "tbq/qcore.hpp"

namespace tbq {

enum class Port { A, B, C, D };
enum class TimeBin { t1, t2 };

/// Standard single-qubit kets. Labels in config files: t1, t2, plus, minus, L, R.
enum class BasisKet { t1, t2, plus, minus, L, R };

std::string_view to_string(BasisKet k);
/// Throws ParseError for labels outside the enum.
BasisKet parse_basis_ket(std::string_view label);
ComplexVector ket(BasisKet k);
bool is_superposition(BasisKet k);

/// n1|t1> + n2 e^{i phi}|t2> with n1, n2 >= 0 and n1^2 + n2^2 = 1.
struct TimeBinQubit {
  double n1 = 1.0;
  double n2 = 0.0;
  double phi = 0.0;

  /// Normalises and extracts the relative phase; the global phase is dropped.
  static TimeBinQubit from_amplitudes(Complex a1, Complex a2);
  static TimeBinQubit from_ket(BasisKet k);

  std::array<Complex, 2> amplitudes() const;
  ComplexVector ket() const;
  bool is_normalized(double tol = 1e-12) const;
};

/// theta(t_k): MZI arm phase difference per time slot.
struct SwitchSetting {
  double theta_t1 = 0.0;
  double theta_t2 = 0.0;

  /// Pass t1, one-third beam splitter for t2.
  static SwitchSetting cphase();
};

struct PortAmplitudes {
  Complex c;
  Complex d;
};

/// Single-photon action of the switch on input port A or B at time t.
PortAmplitudes switch_map(const SwitchSetting& setting, Port input, TimeBin time);

/// 1/sqrt(3) amplitude attenuation of the t1 mode, merged with preparation.
/// Returns the unnormalised pair (n1/sqrt3, n2 e^{i phi}).
std::array<Complex, 2> apply_mda(const TimeBinQubit& q);

struct Mode {
  Port port;
  TimeBin time;
  auto operator<=>(const Mode&) const = default;
};

/// Two-photon amplitudes in the occupation basis. A key (m, n) with m <= n
/// names the normalised state with one photon in each of m and n (two in m
/// when equal). The squared sum is the total probability, which is below one
/// for attenuated inputs.
class TwoPhotonState {
 public:
  using Key = std::pair<Mode, Mode>;

  void add(Mode a, Mode b, Complex amplitude);
  Complex amplitude(Mode a, Mode b) const;
  double squared_norm() const;
  const std::map<Key, Complex>& amplitudes() const noexcept { return amps_; }

  /// Post-selected C&D coincidence amplitudes in basis order, unnormalised.
  ComplexVector coincidence_amplitudes() const;

 private:
  static Key canonical(Mode a, Mode b);
  std::map<Key, Complex> amps_;
};

/// Sends one photon with amplitudes `a` over (t1, t2) into port A and one with
/// `b` into port B, then through the switch. Photons are identical apart from
/// mode, so both routes into the same output pair interfere.
TwoPhotonState propagate_through_switch(const std::array<Complex, 2>& a, const std::array<Complex, 2>& b,
                                        const SwitchSetting& setting);

/// Unnormalised coincidence amplitudes for arbitrary (possibly attenuated)
/// port inputs.
ComplexVector coincidence_output(const std::array<Complex, 2>& a, const std::array<Complex, 2>& b,
                                 const SwitchSetting& setting);

struct PostSelectedOutput {
  ComplexVector state;  // normalised, phase as propagated
  double success_probability = 0.0;
};

/// Full mode propagation: MDA on both photons, the C-Phase switch setting,
/// keep C&D coincidences. Success probability is 1/9 for the lossless model.
PostSelectedOutput cphase_postselected(const TimeBinQubit& control, const TimeBinQubit& target);

/// Same, with an explicit (possibly perturbed) switch setting.
PostSelectedOutput cphase_postselected(const TimeBinQubit& control, const TimeBinQubit& target,
                                       const SwitchSetting& setting);

/// Rotates the global phase so the first nonzero amplitude is real and
/// non-negative.
ComplexVector canonical_phase(const ComplexVector& v, double zero_tol = 1e-14);

/// diag(1, 1, 1, -1).
ComplexMatrix ideal_cphase_unitary();

enum class CnotBasis { zz, xx };

std::string_view to_string(CnotBasis b);

/// Logical encoding of a CNOT input/output bit in the chosen complementary
/// basis. zz: control {t1, t2}, target {plus, minus}. xx: control
/// {plus, minus}, target {t1, t2}.
BasisKet cnot_encoding(CnotBasis basis, bool is_control, int bit);

/// Runs the C-Phase gate on encoded kets and measures in the same encoding.
/// Outcome index is 2 * control_bit + target_bit. Throws InvalidEncoding when
/// the labels are not from the basis convention.
std::array<double, 4> cnot_via_bases(BasisKet control, BasisKet target, CnotBasis basis);

/// 4x4 table, row = logical input (2c + t), from cnot_via_bases.
Eigen::Matrix4d cnot_truth_table(CnotBasis basis);

/// Ideal permutation: zz is CNOT (control flips target); xx is the reversed
/// CNOT (target flips control).
Eigen::Matrix4d ideal_cnot_table(CnotBasis basis);

}  // namespace tbq

#endif  // TBQ_TIMEBIN_HPP
