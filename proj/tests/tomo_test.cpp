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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tbq/errors.hpp"
#include "tbq/metrics.hpp"
#include "tbq/tomo.hpp"

namespace tbq {
namespace {

using testing::frobenius_distance;
using testing::min_eigenvalue;

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(hermitian_part(a - b));
  return 0.5 * s.eigenvalues().cwiseAbs().sum();
}

Observations poisson_observations(const RealVector& probs, double n, std::mt19937_64& rng) {
  Observations obs{RealVector(probs.size()), RealVector::Ones(probs.size())};
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    const double mean = n * probs[k];
    obs.counts[k] = mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(rng)) : 0.0;
  }
  return obs;
}

// Direct sum sum_mn chi_mn A_m rho A_n^dagger.
ComplexMatrix direct_sum(const ComplexMatrix& chi, const ComplexMatrix& rho) {
  const PauliBasis& b = pauli_basis(rho.rows() == 4 ? 2 : 1);
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (std::size_t m = 0; m < b.size(); ++m) {
    for (std::size_t n = 0; n < b.size(); ++n) {
      out += chi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) * b[m] * rho * b[n].adjoint();
    }
  }
  return out;
}

ProcessMatrix random_process(int d, std::mt19937_64& rng) {
  return ProcessMatrix::from_matrix(testing::chi_from_kraus(testing::random_kraus(d, rng)), d);
}

ProcessMatrix depolarizing(double fidelity) {
  ComplexMatrix chi = ComplexMatrix::Zero(16, 16);
  chi(0, 0) = fidelity;
  for (int i = 1; i < 16; ++i) chi(i, i) = (1.0 - fidelity) / 15.0;
  return ProcessMatrix::from_matrix(chi, 4);
}

std::vector<DensityMatrix> gate_outputs(const ProcessMatrix& chi) {
  std::vector<DensityMatrix> out;
  for (const auto& in : tomography_input_set()) {
    out.push_back(DensityMatrix::from_matrix(hermitian_part(direct_sum(chi.chi(), in.state().matrix()))));
  }
  return out;
}

// --- projectors and probabilities ---------------------------------------------

TEST(ProjectorSet, SizesAndInvariants) {
  EXPECT_EQ(ProjectorSet::overcomplete(1).size(), 6u);
  EXPECT_EQ(ProjectorSet::overcomplete(2).size(), 36u);
  EXPECT_EQ(ProjectorSet::minimal(1).size(), 4u);
  EXPECT_EQ(ProjectorSet::minimal(2).size(), 16u);
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  for (const auto& proj : p.projectors()) {
    EXPECT_TRUE(is_hermitian(proj.matrix, 1e-15));
    TBQ_EXPECT_MATRIX_NEAR(proj.matrix * proj.matrix, proj.matrix, 1e-15);
    EXPECT_NEAR(proj.matrix.trace().real(), 1.0, 1e-15);
  }
  EXPECT_EQ(p[p.index_of("plus:L").value()].label, "plus:L");
  EXPECT_FALSE(p.index_of("plus:up").has_value());
}

TEST(MeasurementProbabilities, BornRuleExamples) {
  const ProjectorSet p = ProjectorSet::overcomplete(1);
  const RealVector probs = measurement_probabilities(DensityMatrix::from_pure(ket(BasisKet::t1)), p);
  EXPECT_NEAR(probs[static_cast<Eigen::Index>(p.index_of("t1").value())], 1.0, 1e-15);
  EXPECT_NEAR(probs[static_cast<Eigen::Index>(p.index_of("plus").value())], 0.5, 1e-15);
}

TEST(MeasurementProbabilities, MatchesDirectTrace) {
  std::mt19937_64 rng(41);
  const DensityMatrix rho = DensityMatrix::from_matrix(testing::random_density(4, rng));
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  const RealVector probs = measurement_probabilities(rho, p);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double direct = (p[k].matrix * rho.matrix()).trace().real();
    EXPECT_NEAR(probs[static_cast<Eigen::Index>(k)], direct, 1e-12);
    EXPECT_GE(probs[static_cast<Eigen::Index>(k)], 0.0);
    EXPECT_LE(probs[static_cast<Eigen::Index>(k)], 1.0);
  }
  EXPECT_THROW(measurement_probabilities(rho, ProjectorSet::overcomplete(1)), Error);
}

TEST(Observations, RecordsAccumulatePerSetting) {
  const ProjectorSet p = ProjectorSet::overcomplete(1);
  const std::vector<CountRecord> recs{{0, 5, 1.0}, {2, 7, 2.0}, {0, 3, 1.5}};
  const Observations obs = Observations::from_records(recs, p);
  EXPECT_EQ(obs.counts[0], 8.0);
  EXPECT_EQ(obs.durations[0], 2.5);
  EXPECT_EQ(obs.counts[2], 7.0);
  EXPECT_EQ(obs.durations[1], 0.0);
  const std::vector<CountRecord> bad{{6, 1, 1.0}};
  EXPECT_THROW(Observations::from_records(bad, p), Error);
}

// --- state tomography -----------------------------------------------------------

TEST(QstLinearInversion, ExactSingleQubit) {
  const ProjectorSet p = ProjectorSet::overcomplete(1);
  const DensityMatrix rho = DensityMatrix::from_pure(ket(BasisKet::t1));
  const ComplexMatrix est = qst_linear_inversion(Observations::from_probabilities(measurement_probabilities(rho, p)), p);
  EXPECT_LE(frobenius_distance(est, rho.matrix()), 1e-10);
}

TEST(QstLinearInversion, ExactRandomTwoQubit) {
  std::mt19937_64 rng(42);
  for (const ProjectorSet& p : {ProjectorSet::overcomplete(2), ProjectorSet::minimal(2)}) {
    const DensityMatrix rho = DensityMatrix::from_matrix(testing::random_density(4, rng));
    const ComplexMatrix est =
        qst_linear_inversion(Observations::from_probabilities(measurement_probabilities(rho, p)), p);
    EXPECT_LE(frobenius_distance(est, rho.matrix()), 1e-9);
  }
}

TEST(QstLinearInversion, PoissonCountsTraceDistance95thPercentile) {
  std::mt19937_64 rng(43);
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  std::vector<double> distances;
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = DensityMatrix::from_matrix(testing::random_density(4, rng));
    const Observations obs = poisson_observations(measurement_probabilities(rho, p), 1e4, rng);
    distances.push_back(trace_distance(qst_linear_inversion(obs, p), rho.matrix()));
  }
  std::sort(distances.begin(), distances.end());
  EXPECT_LE(distances[94], 0.05);
}

TEST(QstLinearInversion, IncompleteProjectorsAreSingular) {
  const ProjectorSet p = ProjectorSet::from_kets(1, {{BasisKet::t1}, {BasisKet::t2}, {BasisKet::plus}});
  const RealVector probs = measurement_probabilities(DensityMatrix::maximally_mixed(2), p);
  try {
    qst_linear_inversion(Observations::from_probabilities(probs), p);
    FAIL() << "expected SingularDesign";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularDesign);
  }
}

TEST(QstMle, ExactPlusState) {
  const ProjectorSet p = ProjectorSet::overcomplete(1);
  const DensityMatrix plus = DensityMatrix::from_pure(ket(BasisKet::plus));
  const DensityMatrix est = qst_mle(Observations::from_probabilities(measurement_probabilities(plus, p)), p);
  EXPECT_GE(state_fidelity(est, ket(BasisKet::plus)), 1.0 - 1e-8);
}

TEST(QstMle, EmptySettingConverges) {
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  std::vector<CountRecord> recs;
  std::mt19937_64 rng(44);
  const DensityMatrix rho = DensityMatrix::from_matrix(testing::random_density(4, rng));
  const RealVector probs = measurement_probabilities(rho, p);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const std::uint64_t n = k == 7 ? 0 : static_cast<std::uint64_t>(std::llround(500 * probs[static_cast<Eigen::Index>(k)]));
    recs.push_back({k, n, 1.0});
  }
  const StateMleResult r = qst_mle_detailed(Observations::from_records(recs, p), p);
  EXPECT_GE(min_eigenvalue(r.state.matrix()), -1e-10);
  EXPECT_NEAR(r.state.matrix().trace().real(), 1.0, 1e-10);
}

TEST(QstMle, LikelihoodNonDecreasingAndStationary) {
  std::mt19937_64 rng(45);
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = DensityMatrix::from_matrix(testing::random_density(4, rng));
    const Observations obs = poisson_observations(measurement_probabilities(rho, p), 200.0, rng);
    const StateMleResult r = qst_mle_detailed(obs, p);
    for (std::size_t k = 1; k < r.log_likelihood.size(); ++k) {
      EXPECT_GE(r.log_likelihood[k], r.log_likelihood[k - 1]);
    }
    // Optimality oracle: no feasible direction improves the likelihood.
    const double best = log_likelihood(r.state.matrix(), obs, p);
    EXPECT_NEAR(best, r.log_likelihood.back(), 1e-9 * std::abs(best));
    for (int k = 0; k < 20; ++k) {
      const ComplexMatrix sigma = testing::random_density(4, rng);
      const ComplexMatrix moved = 0.999 * r.state.matrix() + 0.001 * sigma;
      EXPECT_LE(log_likelihood(moved, obs, p), best + 1e-7);
    }
  }
}

TEST(QstMle, BudgetExhaustionReportsBestIterate) {
  std::mt19937_64 rng(46);
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  const DensityMatrix rho = DensityMatrix::from_matrix(testing::random_density(4, rng));
  const Observations obs = poisson_observations(measurement_probabilities(rho, p), 1000.0, rng);
  MleOptions tight;
  tight.max_iterations = 1;
  try {
    qst_mle(obs, p, tight);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonConvergence);
    EXPECT_EQ(e.best_iterate().rows(), 4);
    EXPECT_NEAR(e.best_iterate().trace().real(), 1.0, 1e-10);
    EXPECT_TRUE(std::isfinite(e.best_objective()));
  }
}

TEST(QstMle, PhysicalForArbitraryCounts) {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> counts(0, 50);
  for (int n_qubits = 1; n_qubits <= 2; ++n_qubits) {
    const ProjectorSet p = ProjectorSet::overcomplete(n_qubits);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<CountRecord> recs;
      for (std::size_t k = 0; k < p.size(); ++k) {
        recs.push_back({k, static_cast<std::uint64_t>(trial == 0 && k > 0 ? 0 : counts(rng)), 1.0});
      }
      if (trial == 0) recs[0].counts = 10;
      const DensityMatrix est = qst_mle(recs, p);
      EXPECT_GE(min_eigenvalue(est.matrix()), -1e-10);
      EXPECT_NEAR(est.matrix().trace().real(), 1.0, 1e-10);
    }
  }
}

// --- process matrices -------------------------------------------------------------

TEST(ProcessMatrix, IdealCphaseCoefficients) {
  const ProcessMatrix th = chi_cphase_ideal();
  const PauliBasis& b = pauli_basis(2);
  std::vector<double> c(16, 0.0);
  c[b.index_of("II")] = 0.5;
  c[b.index_of("IZ")] = 0.5;
  c[b.index_of("ZI")] = 0.5;
  c[b.index_of("ZZ")] = -0.5;
  for (int m = 0; m < 16; ++m) {
    for (int n = 0; n < 16; ++n) {
      EXPECT_NEAR(std::abs(th.chi()(m, n) - c[static_cast<std::size_t>(m)] * c[static_cast<std::size_t>(n)]), 0.0,
                  1e-15);
    }
  }
  TBQ_EXPECT_MATRIX_NEAR(ProcessMatrix::from_unitary(ideal_cphase_unitary()).chi(), th.chi(), 1e-15);
  EXPECT_EQ(th.basis_ordering(), "pauli-lexicographic");
}

TEST(QptLinearInversion, IdealGateGivesIdealChi) {
  const ComplexMatrix u = ideal_cphase_unitary();
  std::vector<DensityMatrix> outputs;
  for (const auto& in : tomography_input_set()) outputs.push_back(DensityMatrix::from_pure(u * in.ket()));
  const LinearProcessEstimate est = qpt_linear_inversion(outputs);
  TBQ_EXPECT_MATRIX_NEAR(est.chi.chi(), chi_cphase_ideal().chi(), 1e-12);
  EXPECT_LE(est.residual, 1e-12);
}

TEST(QptLinearInversion, IdentityProcess) {
  std::vector<DensityMatrix> outputs;
  for (const auto& in : tomography_input_set()) outputs.push_back(in.state());
  const ComplexMatrix chi = qpt_linear_inversion(outputs).chi.chi();
  EXPECT_NEAR(std::abs(chi(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(chi.cwiseAbs().sum() - std::abs(chi(0, 0)), 0.0, 1e-11);
}

TEST(QptLinearInversion, MissingInputThrows) {
  std::vector<DensityMatrix> outputs;
  for (const auto& in : tomography_input_set()) outputs.push_back(in.state());
  outputs.pop_back();
  try {
    qpt_linear_inversion(outputs);
    FAIL() << "expected IncompleteInputSet";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompleteInputSet);
  }
}

TEST(QptLinearInversion, RandomChannelRecovered) {
  std::mt19937_64 rng(48);
  const ProcessMatrix chi = random_process(4, rng);
  TBQ_EXPECT_MATRIX_NEAR(qpt_linear_inversion(gate_outputs(chi)).chi.chi(), chi.chi(), 1e-11);
}

TEST(QptMle, IdealDataHighFidelity) {
  const ProcessMatrix est = qpt_mle(gate_outputs(chi_cphase_ideal()));
  EXPECT_GE(process_fidelity(est, chi_cphase_ideal()), 1.0 - 1e-8);
}

TEST(QptMle, AgreesWithLinearInversionOnNoiselessData) {
  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 3; ++trial) {
    const ProcessMatrix chi = random_process(4, rng);
    const auto outputs = gate_outputs(chi);
    const ProcessMatrix lin = qpt_linear_inversion(outputs).chi;
    const ProcessMatrix mle = qpt_mle(outputs);
    // Uhlmann fidelity between the two full-rank estimates.
    EXPECT_GE(process_fidelity(mle, lin), 1.0 - 1e-6);
  }
}

TEST(QptMle, RepairsUnphysicalChi) {
  std::mt19937_64 rng(50);
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  const ComplexMatrix u = ideal_cphase_unitary();
  std::vector<DensityMatrix> outputs;
  for (const auto& in : tomography_input_set()) {
    const DensityMatrix truth = DensityMatrix::from_pure(u * in.ket());
    const Observations obs = poisson_observations(measurement_probabilities(truth, p), 300.0, rng);
    outputs.push_back(DensityMatrix::from_matrix(nearest_density(qst_linear_inversion(obs, p))));
  }
  const ProcessMatrix lin = qpt_linear_inversion(outputs).chi;
  EXPECT_LT(lin.min_eigenvalue(), 0.0);
  const ProcessMleResult mle = qpt_mle_detailed(std::span<const InputOutputPair>([&] {
    std::vector<InputOutputPair> pairs;
    for (std::size_t j = 0; j < outputs.size(); ++j) {
      pairs.push_back({tomography_input_set()[j].state().matrix(), outputs[j].matrix()});
    }
    return pairs;
  }()));
  EXPECT_GE(mle.chi.min_eigenvalue(), -1e-10);
  EXPECT_NEAR(mle.chi.chi().trace().real(), 1.0, 1e-10);
  for (std::size_t k = 1; k < mle.objective.size(); ++k) EXPECT_GE(mle.objective[k], mle.objective[k - 1]);
}

TEST(QptMleCounts, IdealAndNoisyData) {
  const ProjectorSet p = ProjectorSet::overcomplete(2);
  const ComplexMatrix u = ideal_cphase_unitary();
  std::vector<ComplexVector> kets;
  std::vector<Observations> exact;
  std::vector<Observations> noisy;
  std::mt19937_64 rng(51);
  for (const auto& in : tomography_input_set()) {
    kets.push_back(in.ket());
    const RealVector probs = measurement_probabilities(DensityMatrix::from_pure(u * in.ket()), p);
    exact.push_back(Observations::from_probabilities(probs));
    noisy.push_back(poisson_observations(probs, 200.0, rng));
  }
  const ProcessMleResult ideal = qpt_mle_counts(kets, exact, p);
  EXPECT_GE(process_fidelity(ideal.chi, chi_cphase_ideal()), 1.0 - 1e-6);
  const ProcessMleResult fit = qpt_mle_counts(kets, noisy, p);
  EXPECT_GE(fit.chi.min_eigenvalue(), -1e-10);
  EXPECT_GT(process_fidelity(fit.chi, chi_cphase_ideal()), 0.9);
  for (std::size_t k = 1; k < fit.objective.size(); ++k) EXPECT_GE(fit.objective[k], fit.objective[k - 1]);
}

// --- superoperators and composition -----------------------------------------------

ComplexVector vec(const ComplexMatrix& m) { return Eigen::Map<const ComplexVector>(m.data(), m.size()); }

TEST(Superoperator, IdentityAndConjugation) {
  TBQ_EXPECT_MATRIX_NEAR(chi_to_superoperator(ProcessMatrix::identity(4)), ComplexMatrix::Identity(16, 16), 1e-14);
  const ComplexMatrix u = ideal_cphase_unitary();
  const ComplexMatrix want = testing::kron_oracle(u.conjugate(), u);
  TBQ_EXPECT_MATRIX_NEAR(chi_to_superoperator(chi_cphase_ideal()), want, 1e-14);
}

TEST(Superoperator, ActionMatchesDirectSum) {
  std::mt19937_64 rng(52);
  for (int d : {2, 4}) {
    const ProcessMatrix chi = random_process(d, rng);
    const ComplexMatrix s = chi_to_superoperator(chi);
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix rho = testing::random_density(d, rng);
      const ComplexVector got = s * vec(rho);
      EXPECT_LE((got - vec(direct_sum(chi.chi(), rho))).norm(), 1e-12);
      EXPECT_LE((got - vec(apply_process(chi, rho))).norm(), 1e-12);
    }
  }
}

TEST(Superoperator, RoundTripsBothWays) {
  std::mt19937_64 rng(53);
  for (int d : {2, 4}) {
    const ProcessMatrix chi = random_process(d, rng);
    const ComplexMatrix s = chi_to_superoperator(chi);
    EXPECT_LE((superoperator_to_chi_matrix(s, d) - chi.chi()).cwiseAbs().maxCoeff(), 1e-12);
    const ComplexMatrix s2 = chi_to_superoperator(superoperator_to_chi(s, d));
    EXPECT_LE((s2 - s).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Compose, IdentityIsNeutral) {
  std::mt19937_64 rng(54);
  const ProcessMatrix chi = random_process(4, rng);
  TBQ_EXPECT_MATRIX_NEAR(compose_processes(ProcessMatrix::identity(4), chi).chi(), chi.chi(), 1e-12);
  TBQ_EXPECT_MATRIX_NEAR(compose_processes(chi, ProcessMatrix::identity(4)).chi(), chi.chi(), 1e-12);
}

TEST(Compose, ZSquaredIsIdentity) {
  const ProcessMatrix z = ProcessMatrix::from_unitary(tensor_product(pauli::Z(), pauli::I()));
  TBQ_EXPECT_MATRIX_NEAR(compose_processes(z, z).chi(), ProcessMatrix::identity(4).chi(), 1e-12);
}

TEST(Compose, MatchesSequentialApplication) {
  std::mt19937_64 rng(55);
  const ProcessMatrix inner = random_process(4, rng);
  const ProcessMatrix composed = compose_processes(chi_cphase_ideal(), inner);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho = testing::random_density(4, rng);
    const ComplexMatrix seq = direct_sum(chi_cphase_ideal().chi(), direct_sum(inner.chi(), rho));
    EXPECT_LE(frobenius_distance(direct_sum(composed.chi(), rho), seq), 1e-12);
  }
}

TEST(Compose, Associative) {
  std::mt19937_64 rng(56);
  const ProcessMatrix a = random_process(4, rng);
  const ProcessMatrix b = random_process(4, rng);
  const ProcessMatrix c = random_process(4, rng);
  const ComplexMatrix left = compose_processes(compose_processes(a, b), c).chi();
  const ComplexMatrix right = compose_processes(a, compose_processes(b, c)).chi();
  EXPECT_LE((left - right).cwiseAbs().maxCoeff(), 1e-12);
}

// --- deconvolution ---------------------------------------------------------------

TEST(Deconvolve, IdentityInputLeavesTotalUnchanged) {
  std::mt19937_64 rng(57);
  const ProcessMatrix total = random_process(4, rng);
  TBQ_EXPECT_MATRIX_NEAR(deconvolve_input_imperfection(total, ProcessMatrix::identity(4)).chi(), total.chi(), 1e-10);
}

TEST(Deconvolve, RecoversGateFromDepolarizedInputs) {
  const ProcessMatrix input = depolarizing(0.985);
  const ProcessMatrix total = compose_processes(chi_cphase_ideal(), input);
  EXPECT_NEAR(process_fidelity(total, chi_cphase_ideal()), 0.985, 1e-12);
  const ProcessMatrix gate = deconvolve_input_imperfection(total, input);
  EXPECT_GE(process_fidelity(gate, chi_cphase_ideal()), 0.999);
}

TEST(Deconvolve, RecoversGateFromRandomWeakInputChannel) {
  std::mt19937_64 rng(58);
  for (int trial = 0; trial < 5; ++trial) {
    // Mostly-identity input error with fidelity at least 0.98.
    const ProcessMatrix noise = random_process(4, rng);
    const ComplexMatrix mixed = 0.985 * ProcessMatrix::identity(4).chi() + 0.015 * noise.chi();
    const ProcessMatrix input = ProcessMatrix::from_matrix(mixed, 4);
    ASSERT_GE(process_fidelity(input, ProcessMatrix::identity(4)), 0.98);
    const ProcessMatrix total = compose_processes(chi_cphase_ideal(), input);
    EXPECT_GE(process_fidelity(deconvolve_input_imperfection(total, input), chi_cphase_ideal()), 0.999);
  }
}

TEST(Deconvolve, ImperfectGateRisesAfterCompensation) {
  // Gate with its own depolarisation, then inputs at 0.985.
  const double f_gate = 0.9635;
  const ProcessMatrix gate = compose_processes(depolarizing(f_gate), chi_cphase_ideal());
  const ProcessMatrix input = depolarizing(0.985);
  const ProcessMatrix total = compose_processes(gate, input);
  const double f_total = process_fidelity(total, chi_cphase_ideal());
  EXPECT_NEAR(f_total, 0.949, 0.002);
  const double f_comp = process_fidelity(deconvolve_input_imperfection(total, input), chi_cphase_ideal());
  EXPECT_GT(f_comp, f_total);
  EXPECT_NEAR(f_comp, 0.97, 0.02);
  EXPECT_NEAR(f_comp, f_gate, 1e-9);
}

TEST(Deconvolve, SingularInputIsIllConditioned) {
  const ProcessMatrix full = depolarizing(1.0 / 16.0);
  try {
    deconvolve_input_imperfection(chi_cphase_ideal(), full);
    FAIL() << "expected IllConditioned";
  } catch (const IllConditionedError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllConditioned);
    EXPECT_GT(e.condition_number(), kMaxDeconvolutionCondition);
  }
}

// --- input process -----------------------------------------------------------------

DensityMatrix imperfect(BasisKet k, double fidelity) {
  const ComplexVector v = ket(k);
  ComplexVector perp(2);
  perp << -std::conj(v[1]), std::conj(v[0]);
  return DensityMatrix::from_matrix(fidelity * v * v.adjoint() + (1.0 - fidelity) * perp * perp.adjoint());
}

std::vector<DensityMatrix> product_inputs(const std::array<DensityMatrix, 4>& singles) {
  std::vector<DensityMatrix> out;
  for (const auto& a : singles) {
    for (const auto& b : singles) out.push_back(DensityMatrix::from_matrix(tensor_product(a.matrix(), b.matrix())));
  }
  return out;
}

// Single-qubit superoperator fixed by four input/output pairs, and its
// fidelity with the identity channel, Tr(S) / d^2.
double single_qubit_channel_fidelity(const std::array<DensityMatrix, 4>& outputs) {
  const std::array<BasisKet, 4> kets{BasisKet::t1, BasisKet::t2, BasisKet::plus, BasisKet::L};
  ComplexMatrix in(4, 4);
  ComplexMatrix out(4, 4);
  for (int k = 0; k < 4; ++k) {
    const ComplexVector v = ket(kets[static_cast<std::size_t>(k)]);
    in.col(k) = vec(v * v.adjoint());
    out.col(k) = vec(outputs[static_cast<std::size_t>(k)].matrix());
  }
  const ComplexMatrix s = out * in.inverse();
  return s.trace().real() / 4.0;
}

TEST(BuildChiInput, PerfectInputsGiveIdealGate) {
  std::vector<DensityMatrix> inputs;
  for (const auto& in : tomography_input_set()) inputs.push_back(in.state());
  const ProcessMatrix chi = build_chi_input(inputs);
  EXPECT_GE(process_fidelity(chi, chi_cphase_ideal()), 1.0 - 1e-8);
  EXPECT_GE(process_fidelity(input_error_channel(chi), ProcessMatrix::identity(4)), 1.0 - 1e-8);
  inputs.pop_back();
  EXPECT_THROW(build_chi_input(inputs), Error);
}

TEST(BuildChiInput, MeasuredFidelityPatternMatchesProductChannelOracle) {
  const std::array<DensityMatrix, 4> singles{imperfect(BasisKet::t1, 0.999), imperfect(BasisKet::t2, 0.999),
                                             imperfect(BasisKet::plus, 0.979), imperfect(BasisKet::L, 0.982)};
  const double f_single = single_qubit_channel_fidelity(singles);
  const double oracle = f_single * f_single;
  const ProcessMatrix chi = build_chi_input(product_inputs(singles));
  const double f = process_fidelity(chi, chi_cphase_ideal());
  EXPECT_NEAR(f, oracle, 2e-3);
  EXPECT_LT(f, 0.979);
  EXPECT_GT(f, 0.94);
}

TEST(BuildChiInput, FidelityFallsWithPerturbationStrength) {
  double previous = 1.0 + 1e-12;
  for (double eps : {0.0, 0.005, 0.01, 0.02, 0.04, 0.08}) {
    const std::array<DensityMatrix, 4> singles{imperfect(BasisKet::t1, 1.0 - eps), imperfect(BasisKet::t2, 1.0 - eps),
                                               imperfect(BasisKet::plus, 1.0 - 2 * eps),
                                               imperfect(BasisKet::L, 1.0 - 2 * eps)};
    const double f = process_fidelity(build_chi_input(product_inputs(singles)), chi_cphase_ideal());
    EXPECT_LT(f, previous) << eps;
    previous = f;
  }
}

// --- bootstrap ----------------------------------------------------------------------

TEST(Bootstrap, DeterministicAndSpread) {
  std::vector<Observations> data{{(RealVector(2) << 400.0, 100.0).finished(), RealVector::Ones(2)}};
  auto stat = [](std::span<const Observations> d) { return d[0].counts[0] / d[0].counts.sum(); };
  const BootstrapSummary a = parametric_bootstrap(data, 200, 9, stat);
  const BootstrapSummary b = parametric_bootstrap(data, 200, 9, stat);
  EXPECT_EQ(a.replicas, b.replicas);
  EXPECT_NEAR(a.mean, 0.8, 0.01);
  // Binomial-like spread sqrt(p(1-p)/N) = 0.0179.
  EXPECT_NEAR(a.stddev, 0.0179, 0.005);
  EXPECT_THROW(parametric_bootstrap(data, 1, 9, stat), Error);
}

}  // namespace
}  // namespace tbq
