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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tbq/errors.hpp"
#include "tbq/timebin.hpp"

namespace tbq {
namespace {

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

TimeBinQubit random_qubit(std::mt19937_64& rng) {
  const ComplexVector v = testing::random_ket(2, rng);
  return TimeBinQubit::from_amplitudes(v[0], v[1]);
}

TEST(StandardKets, Amplitudes) {
  const double h = 1.0 / std::numbers::sqrt2;
  EXPECT_EQ(ket(BasisKet::t1), (ComplexVector(2) << 1.0, 0.0).finished());
  EXPECT_EQ(ket(BasisKet::t2), (ComplexVector(2) << 0.0, 1.0).finished());
  TBQ_EXPECT_MATRIX_NEAR(ComplexMatrix(ket(BasisKet::plus)), ComplexMatrix((ComplexVector(2) << h, h).finished()), 1e-15);
  TBQ_EXPECT_MATRIX_NEAR(ComplexMatrix(ket(BasisKet::minus)), ComplexMatrix((ComplexVector(2) << h, -h).finished()), 1e-15);
  TBQ_EXPECT_MATRIX_NEAR(ComplexMatrix(ket(BasisKet::L)),
                         ComplexMatrix((ComplexVector(2) << h, Complex(0, h)).finished()), 1e-15);
  TBQ_EXPECT_MATRIX_NEAR(ComplexMatrix(ket(BasisKet::R)),
                         ComplexMatrix((ComplexVector(2) << h, Complex(0, -h)).finished()), 1e-15);
}

TEST(StandardKets, LabelsRoundTrip) {
  for (BasisKet k : {BasisKet::t1, BasisKet::t2, BasisKet::plus, BasisKet::minus, BasisKet::L, BasisKet::R}) {
    EXPECT_EQ(parse_basis_ket(to_string(k)), k);
  }
  EXPECT_THROW(parse_basis_ket("up"), ParseError);
}

TEST(TimeBinQubit, FromAmplitudesExtractsRelativePhase) {
  const TimeBinQubit q = TimeBinQubit::from_amplitudes(Complex(0, 0.6), Complex(-0.8, 0));
  EXPECT_NEAR(q.n1, 0.6, 1e-15);
  EXPECT_NEAR(q.n2, 0.8, 1e-15);
  EXPECT_NEAR(std::remainder(q.phi - std::numbers::pi / 2, 2 * std::numbers::pi), 0.0, 1e-15);
  EXPECT_TRUE(q.is_normalized());
}

TEST(SwitchMap, PassesFirstModeAtZero) {
  const PortAmplitudes out = switch_map(SwitchSetting::cphase(), Port::A, TimeBin::t1);
  EXPECT_NEAR(std::abs(out.c - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.d), 0.0, 1e-15);
}

TEST(SwitchMap, OneThirdSplitterOnSecondMode) {
  const PortAmplitudes out = switch_map(SwitchSetting::cphase(), Port::A, TimeBin::t2);
  EXPECT_NEAR(std::abs(out.c - kInvSqrt3), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.d + std::sqrt(2.0 / 3.0)), 0.0, 1e-15);
}

TEST(SwitchMap, FullSwapAtPi) {
  const PortAmplitudes out = switch_map({std::numbers::pi, std::numbers::pi}, Port::A, TimeBin::t1);
  EXPECT_NEAR(std::abs(out.c), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.d + 1.0), 0.0, 1e-15);
}

TEST(SwitchMap, UnitaryForEveryTheta) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const SwitchSetting s{u(rng), u(rng)};
    for (TimeBin t : {TimeBin::t1, TimeBin::t2}) {
      const PortAmplitudes a = switch_map(s, Port::A, t);
      const PortAmplitudes b = switch_map(s, Port::B, t);
      EXPECT_NEAR(std::norm(a.c) + std::norm(a.d), 1.0, 1e-14);
      EXPECT_NEAR(std::norm(b.c) + std::norm(b.d), 1.0, 1e-14);
      EXPECT_NEAR(std::abs(std::conj(a.c) * b.c + std::conj(a.d) * b.d), 0.0, 1e-14);
    }
  }
  EXPECT_THROW(switch_map(SwitchSetting::cphase(), Port::C, TimeBin::t1), Error);
}

TEST(Mda, AttenuatesFirstMode) {
  auto t1 = apply_mda(TimeBinQubit::from_ket(BasisKet::t1));
  EXPECT_NEAR(std::abs(t1[0] - kInvSqrt3), 0.0, 1e-15);
  EXPECT_EQ(t1[1], Complex(0.0));
  auto t2 = apply_mda(TimeBinQubit::from_ket(BasisKet::t2));
  EXPECT_EQ(t2[0], Complex(0.0));
  EXPECT_NEAR(std::abs(t2[1] - 1.0), 0.0, 1e-15);
  // Direct substitution: (1/sqrt2)/sqrt3 and 1/sqrt2.
  auto plus = apply_mda(TimeBinQubit::from_ket(BasisKet::plus));
  EXPECT_NEAR(std::abs(plus[0] - 1.0 / std::sqrt(6.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(plus[1] - 1.0 / std::numbers::sqrt2), 0.0, 1e-15);
}

TEST(TwoPhotonState, BunchedModesCarryBosonicFactor) {
  // Both photons into the same output mode through a balanced splitter:
  // the |2,0> amplitude is sqrt2 * (1/sqrt2)^2 in magnitude.
  const SwitchSetting balanced{std::numbers::pi / 2, std::numbers::pi / 2};
  const TwoPhotonState s = propagate_through_switch({1.0, 0.0}, {1.0, 0.0}, balanced);
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-14);
  // Hong-Ou-Mandel: no C&D coincidence for identical photons on a 50:50 splitter.
  EXPECT_NEAR(std::abs(s.amplitude({Port::C, TimeBin::t1}, {Port::D, TimeBin::t1})), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude({Port::C, TimeBin::t1}, {Port::C, TimeBin::t1})), 1.0 / std::numbers::sqrt2,
              1e-15);
}

TEST(Propagation, ComputationalBasisPatternBeforeCompensation) {
  const std::array<double, 4> want{1.0, kInvSqrt3, kInvSqrt3, -1.0 / 3.0};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const std::array<Complex, 2> a{x == 0 ? 1.0 : 0.0, x == 1 ? 1.0 : 0.0};
      const std::array<Complex, 2> b{y == 0 ? 1.0 : 0.0, y == 1 ? 1.0 : 0.0};
      const ComplexVector out = coincidence_output(a, b, SwitchSetting::cphase());
      const int idx = 2 * x + y;
      for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(std::abs(out[k] - (k == idx ? want[static_cast<std::size_t>(idx)] : 0.0)), 0.0, 1e-12);
      }
    }
  }
}

TEST(Propagation, ComputationalBasisPatternAfterCompensation) {
  const std::array<double, 4> want{1.0, 1.0, 1.0, -1.0};
  const std::array<BasisKet, 2> bits{BasisKet::t1, BasisKet::t2};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const PostSelectedOutput out =
          cphase_postselected(TimeBinQubit::from_ket(bits[x]), TimeBinQubit::from_ket(bits[y]));
      const int idx = 2 * x + y;
      EXPECT_NEAR(std::abs(out.state[idx] - want[static_cast<std::size_t>(idx)]), 0.0, 1e-12);
      EXPECT_NEAR(out.success_probability, 1.0 / 9.0, 1e-12);
    }
  }
}

TEST(Cphase, T2T2FlipsSign) {
  const PostSelectedOutput out =
      cphase_postselected(TimeBinQubit::from_ket(BasisKet::t2), TimeBinQubit::from_ket(BasisKet::t2));
  EXPECT_NEAR(std::abs(out.state[3] + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(out.success_probability, 1.0 / 9.0, 1e-12);
}

TEST(Cphase, T1T1Unchanged) {
  const PostSelectedOutput out =
      cphase_postselected(TimeBinQubit::from_ket(BasisKet::t1), TimeBinQubit::from_ket(BasisKet::t1));
  EXPECT_NEAR(std::abs(out.state[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(out.success_probability, 1.0 / 9.0, 1e-12);
}

TEST(Cphase, LLGivesEntangledState) {
  const PostSelectedOutput out =
      cphase_postselected(TimeBinQubit::from_ket(BasisKet::L), TimeBinQubit::from_ket(BasisKet::L));
  const ComplexVector want = (tensor_product(ket(BasisKet::t1), ket(BasisKet::L)) +
                              Complex(0, 1) * tensor_product(ket(BasisKet::t2), ket(BasisKet::R))) /
                             std::numbers::sqrt2;
  EXPECT_NEAR(testing::overlap(out.state, want), 1.0, 1e-12);
  TBQ_EXPECT_MATRIX_NEAR(ComplexMatrix(canonical_phase(out.state)), ComplexMatrix(canonical_phase(want)), 1e-12);
}

TEST(Cphase, RandomInputsSucceedWithOneNinth) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const PostSelectedOutput out = cphase_postselected(random_qubit(rng), random_qubit(rng));
    EXPECT_NEAR(out.success_probability, 1.0 / 9.0, 1e-12);
    EXPECT_NEAR(out.state.norm(), 1.0, 1e-12);
  }
}

TEST(Cphase, MatchesIdealUnitaryUpToGlobalPhase) {
  std::mt19937_64 rng(33);
  const ComplexMatrix u = ideal_cphase_unitary();
  for (int trial = 0; trial < 100; ++trial) {
    const TimeBinQubit c = random_qubit(rng);
    const TimeBinQubit t = random_qubit(rng);
    const ComplexVector want = u * tensor_product(c.ket(), t.ket());
    EXPECT_GE(testing::overlap(cphase_postselected(c, t).state, want), 1.0 - 1e-12);
  }
}

TEST(Cphase, ClosedFormAmplitudes) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const TimeBinQubit a = random_qubit(rng);
    const TimeBinQubit b = random_qubit(rng);
    ComplexVector want(4);
    want << a.n1 * b.n1, a.n1 * b.n2 * std::polar(1.0, b.phi), a.n2 * b.n1 * std::polar(1.0, a.phi),
        -a.n2 * b.n2 * std::polar(1.0, a.phi + b.phi);
    TBQ_EXPECT_MATRIX_NEAR(ComplexMatrix(cphase_postselected(a, b).state), ComplexMatrix(want), 1e-12);
  }
}

TEST(IdealUnitary, DiagonalAndPauliExpansionAgree) {
  const ComplexMatrix u = ideal_cphase_unitary();
  ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
  diag.diagonal() << 1.0, 1.0, 1.0, -1.0;
  TBQ_EXPECT_MATRIX_NEAR(u, diag, 0.0);
  const ComplexMatrix i = pauli::I();
  const ComplexMatrix z = pauli::Z();
  const ComplexMatrix expansion = (testing::kron_oracle(i, i) + testing::kron_oracle(i, z) +
                                   testing::kron_oracle(z, i) - testing::kron_oracle(z, z)) /
                                  2.0;
  TBQ_EXPECT_MATRIX_NEAR(u, expansion, 1e-15);
  TBQ_EXPECT_MATRIX_NEAR(u.adjoint() * u, ComplexMatrix::Identity(4, 4), 0.0);
}

TEST(CanonicalPhase, FirstNonzeroIsPositiveReal) {
  ComplexVector v(3);
  v << 0.0, Complex(0, -2), 1.0;
  const ComplexVector c = canonical_phase(v);
  EXPECT_EQ(c[0], Complex(0.0));
  EXPECT_NEAR(c[1].imag(), 0.0, 1e-15);
  EXPECT_GT(c[1].real(), 0.0);
  EXPECT_NEAR(std::abs(c[2]), 1.0, 1e-15);
}

TEST(Cnot, ZzFlipsTargetWhenControlIsT2) {
  const auto p = cnot_via_bases(BasisKet::t2, BasisKet::plus, CnotBasis::zz);
  EXPECT_NEAR(p[3], 1.0, 1e-12);
  EXPECT_NEAR(p[0] + p[1] + p[2], 0.0, 1e-12);
}

TEST(Cnot, ZzIdentityWhenControlIsT1) {
  const auto p = cnot_via_bases(BasisKet::t1, BasisKet::plus, CnotBasis::zz);
  EXPECT_NEAR(p[0], 1.0, 1e-12);
}

TEST(Cnot, RejectsWrongEncoding) {
  try {
    cnot_via_bases(BasisKet::plus, BasisKet::plus, CnotBasis::zz);
    FAIL() << "expected InvalidEncoding";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidEncoding);
  }
  EXPECT_THROW(cnot_via_bases(BasisKet::t1, BasisKet::L, CnotBasis::xx), Error);
}

// Oracle: apply diag(1,1,1,-1) to the encoded product ket and project onto the
// encoded outcomes.
Eigen::Matrix4d brute_force_table(CnotBasis basis) {
  const ComplexMatrix u = ideal_cphase_unitary();
  Eigen::Matrix4d table;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const ComplexVector out =
          u * testing::kron_oracle(ket(cnot_encoding(basis, true, c)), ket(cnot_encoding(basis, false, t)));
      for (int oc = 0; oc < 2; ++oc) {
        for (int ot = 0; ot < 2; ++ot) {
          const ComplexVector v =
              testing::kron_oracle(ket(cnot_encoding(basis, true, oc)), ket(cnot_encoding(basis, false, ot)));
          table(2 * c + t, 2 * oc + ot) = std::norm(v.dot(out));
        }
      }
    }
  }
  return table;
}

TEST(Cnot, TablesMatchBruteForceAndArePermutations) {
  for (CnotBasis b : {CnotBasis::zz, CnotBasis::xx}) {
    const Eigen::Matrix4d table = cnot_truth_table(b);
    EXPECT_LE((table - brute_force_table(b)).cwiseAbs().maxCoeff(), 1e-12) << to_string(b);
    EXPECT_LE((table - ideal_cnot_table(b)).cwiseAbs().maxCoeff(), 1e-12) << to_string(b);
  }
  Eigen::Matrix4d cnot = Eigen::Matrix4d::Zero();
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  EXPECT_EQ(ideal_cnot_table(CnotBasis::zz), cnot);
  Eigen::Matrix4d reversed = Eigen::Matrix4d::Zero();
  reversed(0, 0) = reversed(2, 2) = reversed(1, 3) = reversed(3, 1) = 1.0;
  EXPECT_EQ(ideal_cnot_table(CnotBasis::xx), reversed);
}

}  // namespace
}  // namespace tbq
