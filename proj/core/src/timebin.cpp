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

#include "tbq/timebin.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tbq/errors.hpp"

namespace tbq {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

int index_of(TimeBin t) { return t == TimeBin::t1 ? 0 : 1; }

}  // namespace

std::string_view to_string(BasisKet k) {
  switch (k) {
    case BasisKet::t1: return "t1";
    case BasisKet::t2: return "t2";
    case BasisKet::plus: return "plus";
    case BasisKet::minus: return "minus";
    case BasisKet::L: return "L";
    case BasisKet::R: return "R";
  }
  return "?";
}

BasisKet parse_basis_ket(std::string_view label) {
  for (BasisKet k : {BasisKet::t1, BasisKet::t2, BasisKet::plus, BasisKet::minus, BasisKet::L, BasisKet::R}) {
    if (label == to_string(k)) return k;
  }
  throw ParseError("unknown basis label '" + std::string(label) + "'", 0);
}

ComplexVector ket(BasisKet k) {
  ComplexVector v(2);
  switch (k) {
    case BasisKet::t1: v << 1.0, 0.0; break;
    case BasisKet::t2: v << 0.0, 1.0; break;
    case BasisKet::plus: v << kInvSqrt2, kInvSqrt2; break;
    case BasisKet::minus: v << kInvSqrt2, -kInvSqrt2; break;
    case BasisKet::L: v << kInvSqrt2, Complex(0.0, kInvSqrt2); break;
    case BasisKet::R: v << kInvSqrt2, Complex(0.0, -kInvSqrt2); break;
  }
  return v;
}

bool is_superposition(BasisKet k) { return k != BasisKet::t1 && k != BasisKet::t2; }

TimeBinQubit TimeBinQubit::from_amplitudes(Complex a1, Complex a2) {
  const double norm = std::hypot(std::abs(a1), std::abs(a2));
  if (norm < 1e-300) throw Error(ErrorKind::ZeroParameter, "time-bin qubit with zero amplitudes");
  TimeBinQubit q;
  q.n1 = std::abs(a1) / norm;
  q.n2 = std::abs(a2) / norm;
  q.phi = (std::abs(a1) > 0.0 && std::abs(a2) > 0.0) ? std::arg(a2) - std::arg(a1) : 0.0;
  return q;
}

TimeBinQubit TimeBinQubit::from_ket(BasisKet k) {
  const ComplexVector v = ::tbq::ket(k);
  return from_amplitudes(v[0], v[1]);
}

std::array<Complex, 2> TimeBinQubit::amplitudes() const { return {Complex(n1, 0.0), std::polar(n2, phi)}; }

ComplexVector TimeBinQubit::ket() const {
  const auto a = amplitudes();
  ComplexVector v(2);
  v << a[0], a[1];
  return v;
}

bool TimeBinQubit::is_normalized(double tol) const {
  return n1 >= 0.0 && n2 >= 0.0 && std::abs(n1 * n1 + n2 * n2 - 1.0) <= tol;
}

SwitchSetting SwitchSetting::cphase() { return {0.0, 2.0 * std::acos(kInvSqrt3)}; }

PortAmplitudes switch_map(const SwitchSetting& setting, Port input, TimeBin time) {
  const double theta = time == TimeBin::t1 ? setting.theta_t1 : setting.theta_t2;
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  switch (input) {
    case Port::A: return {c, -s};
    case Port::B: return {s, c};
    default: throw Error(ErrorKind::InvalidArgument, "switch input must be port A or B");
  }
}

std::array<Complex, 2> apply_mda(const TimeBinQubit& q) {
  const auto a = q.amplitudes();
  return {a[0] * kInvSqrt3, a[1]};
}

TwoPhotonState::Key TwoPhotonState::canonical(Mode a, Mode b) {
  return a <= b ? Key{a, b} : Key{b, a};
}

void TwoPhotonState::add(Mode a, Mode b, Complex amplitude) { amps_[canonical(a, b)] += amplitude; }

Complex TwoPhotonState::amplitude(Mode a, Mode b) const {
  const auto it = amps_.find(canonical(a, b));
  return it == amps_.end() ? Complex{} : it->second;
}

double TwoPhotonState::squared_norm() const {
  double total = 0.0;
  for (const auto& [key, amp] : amps_) total += std::norm(amp);
  return total;
}

ComplexVector TwoPhotonState::coincidence_amplitudes() const {
  ComplexVector out(4);
  for (TimeBin x : {TimeBin::t1, TimeBin::t2}) {
    for (TimeBin y : {TimeBin::t1, TimeBin::t2}) {
      out[2 * index_of(x) + index_of(y)] = amplitude({Port::C, x}, {Port::D, y});
    }
  }
  return out;
}

TwoPhotonState propagate_through_switch(const std::array<Complex, 2>& a, const std::array<Complex, 2>& b,
                                        const SwitchSetting& setting) {
  TwoPhotonState out;
  const std::array<TimeBin, 2> times{TimeBin::t1, TimeBin::t2};
  for (TimeBin ta : times) {
    const PortAmplitudes ua = switch_map(setting, Port::A, ta);
    const std::array<std::pair<Mode, Complex>, 2> from_a{
        std::pair{Mode{Port::C, ta}, ua.c}, std::pair{Mode{Port::D, ta}, ua.d}};
    for (TimeBin tb : times) {
      const PortAmplitudes ub = switch_map(setting, Port::B, tb);
      const std::array<std::pair<Mode, Complex>, 2> from_b{
          std::pair{Mode{Port::C, tb}, ub.c}, std::pair{Mode{Port::D, tb}, ub.d}};
      const Complex input = a[index_of(ta)] * b[index_of(tb)];
      for (const auto& [ma, amp_a] : from_a) {
        for (const auto& [mb, amp_b] : from_b) {
          // a^dagger a^dagger |0> = sqrt(2) |2>
          const double bunching = ma == mb ? std::numbers::sqrt2 : 1.0;
          out.add(ma, mb, bunching * input * amp_a * amp_b);
        }
      }
    }
  }
  return out;
}

ComplexVector coincidence_output(const std::array<Complex, 2>& a, const std::array<Complex, 2>& b,
                                 const SwitchSetting& setting) {
  return propagate_through_switch(a, b, setting).coincidence_amplitudes();
}

PostSelectedOutput cphase_postselected(const TimeBinQubit& control, const TimeBinQubit& target,
                                       const SwitchSetting& setting) {
  const ComplexVector amps = coincidence_output(apply_mda(control), apply_mda(target), setting);
  const double p = amps.squaredNorm();
  if (p < 1e-300) throw Error(ErrorKind::ZeroParameter, "no coincidence amplitude survives post-selection");
  return {amps / std::sqrt(p), p};
}

PostSelectedOutput cphase_postselected(const TimeBinQubit& control, const TimeBinQubit& target) {
  return cphase_postselected(control, target, SwitchSetting::cphase());
}

ComplexVector canonical_phase(const ComplexVector& v, double zero_tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > zero_tol) return v * std::polar(1.0, -std::arg(v[i]));
  }
  return v;
}

ComplexMatrix ideal_cphase_unitary() {
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  u(3, 3) = -1.0;
  return u;
}

std::string_view to_string(CnotBasis b) { return b == CnotBasis::zz ? "zz" : "xx"; }

BasisKet cnot_encoding(CnotBasis basis, bool is_control, int bit) {
  if (bit != 0 && bit != 1) throw Error(ErrorKind::InvalidEncoding, "logical bit must be 0 or 1");
  const bool computational = (basis == CnotBasis::zz) == is_control;
  if (computational) return bit == 0 ? BasisKet::t1 : BasisKet::t2;
  return bit == 0 ? BasisKet::plus : BasisKet::minus;
}

std::array<double, 4> cnot_via_bases(BasisKet control, BasisKet target, CnotBasis basis) {
  auto check = [basis](BasisKet k, bool is_control) {
    if (k != cnot_encoding(basis, is_control, 0) && k != cnot_encoding(basis, is_control, 1)) {
      throw Error(ErrorKind::InvalidEncoding,
                  std::string(is_control ? "control" : "target") + " label '" + std::string(to_string(k)) +
                      "' is not a " + std::string(to_string(basis)) + "-basis encoding");
    }
  };
  check(control, true);
  check(target, false);

  const ComplexVector out =
      cphase_postselected(TimeBinQubit::from_ket(control), TimeBinQubit::from_ket(target)).state;
  std::array<double, 4> probs{};
  double total = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const ComplexVector proj =
          tensor_product(ket(cnot_encoding(basis, true, c)), ket(cnot_encoding(basis, false, t)));
      probs[2 * c + t] = std::norm(proj.dot(out));
      total += probs[2 * c + t];
    }
  }
  for (double& p : probs) p /= total;
  return probs;
}

Eigen::Matrix4d cnot_truth_table(CnotBasis basis) {
  Eigen::Matrix4d table;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const auto probs = cnot_via_bases(cnot_encoding(basis, true, c), cnot_encoding(basis, false, t), basis);
      for (int k = 0; k < 4; ++k) table(2 * c + t, k) = probs[k];
    }
  }
  return table;
}

Eigen::Matrix4d ideal_cnot_table(CnotBasis basis) {
  Eigen::Matrix4d table = Eigen::Matrix4d::Zero();
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const int out = basis == CnotBasis::zz ? 2 * c + (t ^ c) : 2 * (c ^ t) + t;
      table(2 * c + t, out) = 1.0;
    }
  }
  return table;
}

}  // namespace tbq
