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

#ifndef TBQ_TOMO_HPP
#define TBQ_TOMO_HPP

// State and process tomography: linear inversion, maximum likelihood over
// Cholesky parameters, chi-matrix algebra and input-imperfection removal.
//
// chi matrices are expressed over the lexicographic Pauli product basis
// (see PauliBasis) and normalised to unit trace.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbq/qcore.hpp"
#include "tbq/timebin.hpp"

namespace tbq {

/// Rank-1 projector onto a product of standard kets.
struct Projector {
  std::string label;  // per-qubit labels joined by ':', e.g. "plus:L"
  std::vector<BasisKet> kets;
  ComplexVector ket;
  ComplexMatrix matrix;
};

std::string join_labels(std::span<const BasisKet> kets);
/// Throws ParseError on unknown per-qubit labels.
std::vector<BasisKet> split_labels(std::string_view label);

class ProjectorSet {
 public:
  /// {t1, t2, plus, minus, L, R} per qubit: 6 or 36 settings.
  static ProjectorSet overcomplete(int n_qubits);
  /// {t1, t2, plus, L} per qubit: 4 or 16 settings.
  static ProjectorSet minimal(int n_qubits);
  static ProjectorSet from_kets(int n_qubits, const std::vector<std::vector<BasisKet>>& kets);

  int n_qubits() const noexcept { return n_qubits_; }
  int dim() const noexcept { return 1 << n_qubits_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  const Projector& operator[](std::size_t i) const { return projectors_[i]; }
  const std::vector<Projector>& projectors() const noexcept { return projectors_; }
  /// dim x size matrix whose columns are the projector kets.
  const ComplexMatrix& ket_matrix() const noexcept { return kets_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

 private:
  ProjectorSet(int n_qubits, std::vector<Projector> projectors);
  int n_qubits_;
  std::vector<Projector> projectors_;
  ComplexMatrix kets_;
};

struct CountRecord {
  std::size_t setting_index = 0;
  std::uint64_t counts = 0;
  double duration_s = 0.0;

  bool operator==(const CountRecord&) const = default;
};

/// Per-setting data in the form the estimators consume. Counts may be
/// fractional (exact-probability data); a zero duration marks a setting that
/// was not measured.
struct Observations {
  RealVector counts;
  RealVector durations;

  static Observations from_records(std::span<const CountRecord> records, const ProjectorSet& projs);
  static Observations from_probabilities(const RealVector& probabilities);
  double total_counts() const { return counts.sum(); }
};

/// A two-qubit product input; label is "control:target".
struct TomographyInput {
  BasisKet control;
  BasisKet target;

  std::string label() const;
  ComplexVector ket() const;
  DensityMatrix state() const;
};

/// The 16 products of {t1, t2, plus, L} in the order t1t1, t1t2, t1+, t1L,
/// t2t1, ..., LL.
const std::array<TomographyInput, 16>& tomography_input_set();

class ProcessMatrix {
 public:
  static constexpr std::string_view kPauliLexicographic = "pauli-lexicographic";

  /// dim is the system dimension (2 or 4); chi must be dim^2 x dim^2 and
  /// Hermitian. The trace is normalised to one.
  static ProcessMatrix from_matrix(const ComplexMatrix& chi, int dim);
  /// rank-1 chi of a unitary: U = sum_m c_m A_m.
  static ProcessMatrix from_unitary(const ComplexMatrix& u);
  static ProcessMatrix identity(int dim);

  int dim() const noexcept { return dim_; }
  const ComplexMatrix& chi() const noexcept { return chi_; }
  std::string_view basis_ordering() const noexcept { return kPauliLexicographic; }
  double min_eigenvalue() const;

 private:
  ProcessMatrix(ComplexMatrix chi, int dim) : chi_(std::move(chi)), dim_(dim) {}
  ComplexMatrix chi_;
  int dim_;
};

/// Ideal C-Phase process, (II + IZ + ZI - ZZ)/2.
ProcessMatrix chi_cphase_ideal();

/// sum_mn chi_mn A_m rho A_n^dagger, evaluated term by term.
ComplexMatrix apply_process(const ProcessMatrix& chi, const ComplexMatrix& rho);

// --- state tomography -------------------------------------------------------

/// p_k = Tr(P_k rho). Throws DimensionMismatch.
RealVector measurement_probabilities(const DensityMatrix& rho, const ProjectorSet& projs);

/// Least-squares inversion with Hermiticity and unit trace imposed. The result
/// may have negative eigenvalues. Throws SingularDesign when the measured
/// projectors do not span operator space.
ComplexMatrix qst_linear_inversion(const Observations& data, const ProjectorSet& projs);
ComplexMatrix qst_linear_inversion(std::span<const CountRecord> records, const ProjectorSet& projs);

struct MleOptions {
  long max_iterations = 100000;
  double rel_tolerance = 1e-10;
  double step_tolerance = 1e-8;
};

struct StateMleResult {
  DensityMatrix state;
  std::vector<double> log_likelihood;  // after each accepted iterate
  long iterations = 0;
};

/// Poisson log-likelihood with the overall rate profiled out:
///   sum_k n_k log p_k - N log(sum_k t_k p_k).
double log_likelihood(const ComplexMatrix& rho, const Observations& data, const ProjectorSet& projs);

/// Maximum-likelihood state, seeded from linear inversion. Throws
/// NonConvergenceError carrying the best iterate.
StateMleResult qst_mle_detailed(const Observations& data, const ProjectorSet& projs,
                                const MleOptions& options = {});
DensityMatrix qst_mle(const Observations& data, const ProjectorSet& projs, const MleOptions& options = {});
DensityMatrix qst_mle(std::span<const CountRecord> records, const ProjectorSet& projs,
                      const MleOptions& options = {});

// --- process tomography -----------------------------------------------------

struct InputOutputPair {
  ComplexMatrix input;
  ComplexMatrix output;
};

struct LinearProcessEstimate {
  ProcessMatrix chi;
  double residual = 0.0;  // Frobenius norm of the fit residual before trace normalisation
};

/// Solves E(rho_j) = sum_mn chi_mn A_m rho_j A_n^dagger for chi. Throws
/// IncompleteInputSet when the inputs do not span operator space.
LinearProcessEstimate qpt_linear_inversion(std::span<const InputOutputPair> pairs);
/// Outputs ordered as tomography_input_set().
LinearProcessEstimate qpt_linear_inversion(std::span<const DensityMatrix> outputs);

struct ProcessMleResult {
  ProcessMatrix chi;
  std::vector<double> objective;  // log-likelihood after each accepted iterate
  long iterations = 0;
};

/// Physical chi closest to the data in the least-squares sense:
/// maximises -sum_j ||E_chi(rho_j) - output_j||_F^2 over PSD unit-trace chi.
ProcessMleResult qpt_mle_detailed(std::span<const InputOutputPair> pairs, const MleOptions& options = {});
ProcessMatrix qpt_mle(std::span<const InputOutputPair> pairs, const MleOptions& options = {});
ProcessMatrix qpt_mle(std::span<const DensityMatrix> outputs, const MleOptions& options = {});

/// Joint Poisson likelihood of raw counts for pure inputs, with a profiled
/// rate per input.
ProcessMleResult qpt_mle_counts(std::span<const ComplexVector> inputs, std::span<const Observations> data,
                                const ProjectorSet& projs, const MleOptions& options = {});

/// S with S vec(rho) = vec(E(rho)), column-major vec.
ComplexMatrix chi_to_superoperator(const ProcessMatrix& chi);
/// Exact inverse of chi_to_superoperator before trace normalisation.
ComplexMatrix superoperator_to_chi_matrix(const ComplexMatrix& superop, int dim);
ProcessMatrix superoperator_to_chi(const ComplexMatrix& superop, int dim);

/// outer after inner.
ProcessMatrix compose_processes(const ProcessMatrix& outer, const ProcessMatrix& inner);

inline constexpr double kMaxDeconvolutionCondition = 1e8;
inline constexpr double kPinvRelativeCutoff = 1e-8;

/// Removes a preceding input channel: S_gate = S_total pinv(S_input), mapped
/// back to the nearest physical chi. chi_input is the preparation channel
/// alone (identity means perfect inputs). Throws IllConditionedError.
ProcessMatrix deconvolve_input_imperfection(const ProcessMatrix& chi_total, const ProcessMatrix& chi_input);

/// chi of (ideal gate after preparation error), reconstructed from the pairs
/// (ideal input_j -> U measured_j U^dagger). measured_inputs are ordered as
/// tomography_input_set(). Throws IncompleteInputSet.
ProcessMatrix build_chi_input(std::span<const DensityMatrix> measured_inputs,
                              const ComplexMatrix& ideal_gate = ideal_cphase_unitary());

/// Strips the ideal gate from a build_chi_input result, leaving the
/// preparation channel that deconvolve_input_imperfection expects.
ProcessMatrix input_error_channel(const ProcessMatrix& chi_input,
                                  const ComplexMatrix& ideal_gate = ideal_cphase_unitary());

// --- error bars -------------------------------------------------------------

struct BootstrapSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> replicas;
};

/// Parametric bootstrap: every count is redrawn from Poisson(observed count)
/// and the statistic recomputed. Deterministic in seed.
BootstrapSummary parametric_bootstrap(std::span<const Observations> data, int replicas, std::uint64_t seed,
                                      const std::function<double(std::span<const Observations>)>& statistic);

}  // namespace tbq

#endif  // TBQ_TOMO_HPP
