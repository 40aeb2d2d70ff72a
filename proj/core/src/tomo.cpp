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

#include "tbq/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <string>

#include "ascent.hpp"
#include "tbq/errors.hpp"

namespace tbq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ComplexMatrix ket_projector(const ComplexVector& v) { return v * v.adjoint(); }

// Seed mixing for MLE starts. Small enough that noiseless data reaches the
// boundary quickly, large enough for the factorisation to exist.
constexpr double kStateSeedMixing = 1e-6;
constexpr double kProcessSeedMixing = 1e-9;

// One independent Poisson experiment: kets are the columns of `kets`, and the
// overall rate is profiled out per group.
struct LikelihoodGroup {
  ComplexMatrix kets;
  RealVector counts;
  RealVector durations;
};

// sum_g [ sum_k n_k log p_k - N_g log(sum_k t_k p_k) ] with p_k = <k|rho|k>.
// When R is non-null it receives dL/drho (Hermitian).
double grouped_log_likelihood(const ComplexMatrix& rho, const std::vector<LikelihoodGroup>& groups,
                              ComplexMatrix* gradient) {
  double total = 0.0;
  if (gradient) *gradient = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& g : groups) {
    const ComplexMatrix image = rho * g.kets;
    const Eigen::Index n = g.kets.cols();
    RealVector p(n);
    double exposure = 0.0;
    double counts = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      p[k] = g.kets.col(k).dot(image.col(k)).real();
      if (g.durations[k] <= 0.0) continue;
      exposure += g.durations[k] * p[k];
      counts += g.counts[k];
      if (g.counts[k] > 0.0) {
        if (!(p[k] > 0.0)) return kNegInf;
        total += g.counts[k] * std::log(p[k]);
      }
    }
    if (counts <= 0.0) continue;
    if (!(exposure > 0.0)) return kNegInf;
    total -= counts * std::log(exposure);
    if (gradient) {
      RealVector weight(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (g.durations[k] <= 0.0) {
          weight[k] = 0.0;
          continue;
        }
        weight[k] = (g.counts[k] > 0.0 ? g.counts[k] / p[k] : 0.0) - counts * g.durations[k] / exposure;
      }
      *gradient += g.kets * weight.cast<Complex>().asDiagonal() * g.kets.adjoint();
    }
  }
  return total;
}

using MatrixObjective = std::function<double(const ComplexMatrix& rho, ComplexMatrix* gradient)>;

struct CholeskyFit {
  ComplexMatrix rho;
  std::vector<double> history;
  long iterations = 0;
};

// Maximises a function of a unit-trace PSD matrix over T^dagger T / Tr.
CholeskyFit fit_over_cholesky(const MatrixObjective& objective, int dim, const ComplexMatrix& seed,
                              double seed_mixing, const MleOptions& options, const char* who) {
  const Eigen::Index d = dim;
  detail::Objective wrapped = [&](const RealVector& t, RealVector& grad) -> double {
    const ComplexMatrix lower = cholesky_factor_from_params(std::span<const double>(t.data(), t.size()), dim);
    const ComplexMatrix a = lower.adjoint() * lower;
    const double tr = a.trace().real();
    if (!(tr > 1e-300) || !std::isfinite(tr)) return kNegInf;
    const ComplexMatrix rho = a / tr;
    ComplexMatrix dfdrho;
    const double f = objective(rho, &dfdrho);
    if (!std::isfinite(f)) return f;
    const Complex shift = (dfdrho * rho).trace();
    const ComplexMatrix g = (dfdrho - shift * ComplexMatrix::Identity(d, d)) / tr;
    const ComplexMatrix m = lower * g;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) grad[k++] = 2.0 * m(i, i).real();
    for (Eigen::Index i = 1; i < d; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        grad[k++] = 2.0 * m(i, j).real();
        grad[k++] = 2.0 * m(i, j).imag();
      }
    }
    return f;
  };

  detail::AscentOptions ascent;
  ascent.max_iterations = options.max_iterations;
  ascent.rel_tolerance = options.rel_tolerance;
  ascent.step_tolerance = options.step_tolerance;
  RealVector t0 = cholesky_params_for(hermitian_part(seed), seed_mixing);
  t0 /= t0.norm();
  detail::AscentResult result = detail::maximize(wrapped, std::move(t0), ascent);

  ComplexMatrix rho =
      psd_from_cholesky_params(std::span<const double>(result.x.data(), result.x.size()), dim);
  if (!result.converged) {
    throw NonConvergenceError(std::string(who) + ": no convergence after " +
                                  std::to_string(result.iterations) + " iterations",
                              rho, result.value, result.iterations);
  }
  return {std::move(rho), std::move(result.history), result.iterations};
}

const ComplexMatrix& superoperator_basis(int dim) {
  // Column m + n D holds vec(conj(A_n) (x) A_m), so vec(S) = M vec(chi).
  static std::once_flag once;
  static std::map<int, ComplexMatrix> cache;
  std::call_once(once, [] {
    for (int n_qubits : {1, 2}) {
      const PauliBasis& basis = pauli_basis(n_qubits);
      const Eigen::Index big = static_cast<Eigen::Index>(basis.size());
      const Eigen::Index d = basis.dim();
      ComplexMatrix m(d * d * d * d, big * big);
      for (Eigen::Index n = 0; n < big; ++n) {
        for (Eigen::Index a = 0; a < big; ++a) {
          const ComplexMatrix k = tensor_product(ComplexMatrix(basis[n].conjugate()), basis[a]);
          m.col(a + n * big) = Eigen::Map<const ComplexVector>(k.data(), k.size());
        }
      }
      cache.emplace(static_cast<int>(d), std::move(m));
    }
  });
  const auto it = cache.find(dim);
  if (it == cache.end()) throw Error(ErrorKind::DimensionMismatch, "process dimension must be 2 or 4");
  return it->second;
}

int qubits_for_dim(int dim) {
  if (dim == 2) return 1;
  if (dim == 4) return 2;
  throw Error(ErrorKind::DimensionMismatch, "dimension must be 2 or 4");
}

struct LinearSystem {
  ComplexMatrix design;
  ComplexVector rhs;
  int dim;
};

LinearSystem process_design(std::span<const InputOutputPair> pairs) {
  if (pairs.empty()) throw Error(ErrorKind::IncompleteInputSet, "no input/output pairs");
  const int d = static_cast<int>(pairs.front().input.rows());
  const PauliBasis& basis = pauli_basis(qubits_for_dim(d));
  const Eigen::Index big = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  LinearSystem sys{ComplexMatrix(block * static_cast<Eigen::Index>(pairs.size()), big * big),
                   ComplexVector(block * static_cast<Eigen::Index>(pairs.size())), d};
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto& [in, out] = pairs[j];
    if (in.rows() != d || in.cols() != d || out.rows() != d || out.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch, "input/output pairs must share one dimension");
    }
    const Eigen::Index row = static_cast<Eigen::Index>(j) * block;
    std::vector<ComplexMatrix> left(big);
    for (Eigen::Index m = 0; m < big; ++m) left[m] = basis[m] * in;
    for (Eigen::Index n = 0; n < big; ++n) {
      const ComplexMatrix right = basis[n].adjoint();
      for (Eigen::Index m = 0; m < big; ++m) {
        const ComplexMatrix term = left[m] * right;
        sys.design.block(row, m + n * big, block, 1) = Eigen::Map<const ComplexVector>(term.data(), block);
      }
    }
    sys.rhs.segment(row, block) = Eigen::Map<const ComplexVector>(out.data(), block);
  }
  return sys;
}

std::vector<InputOutputPair> standard_pairs(std::span<const DensityMatrix> outputs) {
  const auto& inputs = tomography_input_set();
  if (outputs.size() != inputs.size()) {
    throw Error(ErrorKind::IncompleteInputSet,
                "expected 16 outputs, got " + std::to_string(outputs.size()));
  }
  std::vector<InputOutputPair> pairs;
  pairs.reserve(inputs.size());
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    pairs.push_back({inputs[j].state().matrix(), outputs[j].matrix()});
  }
  return pairs;
}

}  // namespace

// --- projectors -------------------------------------------------------------

std::string join_labels(std::span<const BasisKet> kets) {
  std::string out;
  for (std::size_t i = 0; i < kets.size(); ++i) {
    if (i) out += ':';
    out += to_string(kets[i]);
  }
  return out;
}

std::vector<BasisKet> split_labels(std::string_view label) {
  std::vector<BasisKet> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = label.find(':', start);
    out.push_back(parse_basis_ket(label.substr(start, colon == std::string_view::npos ? label.npos : colon - start)));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  return out;
}

ProjectorSet::ProjectorSet(int n_qubits, std::vector<Projector> projectors)
    : n_qubits_(n_qubits), projectors_(std::move(projectors)) {
  kets_.resize(dim(), static_cast<Eigen::Index>(projectors_.size()));
  for (std::size_t k = 0; k < projectors_.size(); ++k) kets_.col(static_cast<Eigen::Index>(k)) = projectors_[k].ket;
}

ProjectorSet ProjectorSet::from_kets(int n_qubits, const std::vector<std::vector<BasisKet>>& kets) {
  if (n_qubits != 1 && n_qubits != 2) throw Error(ErrorKind::InvalidArgument, "projector sets cover 1 or 2 qubits");
  std::vector<Projector> out;
  for (const auto& per_qubit : kets) {
    if (static_cast<int>(per_qubit.size()) != n_qubits) {
      throw Error(ErrorKind::DimensionMismatch, "projector ket count does not match qubit count");
    }
    ComplexVector v = ket(per_qubit[0]);
    for (std::size_t q = 1; q < per_qubit.size(); ++q) v = tensor_product(v, ket(per_qubit[q]));
    out.push_back({join_labels(per_qubit), per_qubit, v, ket_projector(v)});
  }
  return ProjectorSet(n_qubits, std::move(out));
}

namespace {
ProjectorSet product_set(int n_qubits, const std::vector<BasisKet>& single) {
  std::vector<std::vector<BasisKet>> kets;
  if (n_qubits == 1) {
    for (BasisKet a : single) kets.push_back({a});
  } else {
    for (BasisKet a : single) {
      for (BasisKet b : single) kets.push_back({a, b});
    }
  }
  return ProjectorSet::from_kets(n_qubits, kets);
}
}  // namespace

ProjectorSet ProjectorSet::overcomplete(int n_qubits) {
  return product_set(n_qubits, {BasisKet::t1, BasisKet::t2, BasisKet::plus, BasisKet::minus, BasisKet::L, BasisKet::R});
}

ProjectorSet ProjectorSet::minimal(int n_qubits) {
  return product_set(n_qubits, {BasisKet::t1, BasisKet::t2, BasisKet::plus, BasisKet::L});
}

std::optional<std::size_t> ProjectorSet::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < projectors_.size(); ++k) {
    if (projectors_[k].label == label) return k;
  }
  return std::nullopt;
}

Observations Observations::from_records(std::span<const CountRecord> records, const ProjectorSet& projs) {
  Observations obs{RealVector::Zero(static_cast<Eigen::Index>(projs.size())),
                   RealVector::Zero(static_cast<Eigen::Index>(projs.size()))};
  for (const auto& r : records) {
    if (r.setting_index >= projs.size()) {
      throw Error(ErrorKind::DimensionMismatch, "count record refers to setting " + std::to_string(r.setting_index));
    }
    if (!(r.duration_s >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative acquisition time");
    obs.counts[static_cast<Eigen::Index>(r.setting_index)] += static_cast<double>(r.counts);
    obs.durations[static_cast<Eigen::Index>(r.setting_index)] += r.duration_s;
  }
  return obs;
}

Observations Observations::from_probabilities(const RealVector& probabilities) {
  return {probabilities.cwiseMax(0.0), RealVector::Ones(probabilities.size())};
}

std::string TomographyInput::label() const {
  const std::array<BasisKet, 2> k{control, target};
  return join_labels(k);
}

ComplexVector TomographyInput::ket() const { return tensor_product(::tbq::ket(control), ::tbq::ket(target)); }

DensityMatrix TomographyInput::state() const { return DensityMatrix::from_pure(ket()); }

const std::array<TomographyInput, 16>& tomography_input_set() {
  static const std::array<TomographyInput, 16> inputs = [] {
    std::array<TomographyInput, 16> out{};
    const std::array<BasisKet, 4> single{BasisKet::t1, BasisKet::t2, BasisKet::plus, BasisKet::L};
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) out[4 * a + b] = {single[a], single[b]};
    }
    return out;
  }();
  return inputs;
}

// --- process matrices -------------------------------------------------------

ProcessMatrix ProcessMatrix::from_matrix(const ComplexMatrix& chi, int dim) {
  qubits_for_dim(dim);
  const Eigen::Index big = static_cast<Eigen::Index>(dim) * dim;
  if (chi.rows() != big || chi.cols() != big) {
    throw Error(ErrorKind::DimensionMismatch, "chi must be " + std::to_string(big) + "x" + std::to_string(big));
  }
  if (!is_hermitian(chi)) throw Error(ErrorKind::NotHermitian, "chi matrix is not Hermitian");
  const double tr = chi.trace().real();
  if (!(std::abs(tr) > 1e-300)) throw Error(ErrorKind::ZeroParameter, "chi matrix has zero trace");
  return ProcessMatrix(hermitian_part(chi) / tr, dim);
}

ProcessMatrix ProcessMatrix::from_unitary(const ComplexMatrix& u) {
  const int d = static_cast<int>(u.rows());
  const PauliBasis& basis = pauli_basis(qubits_for_dim(d));
  ComplexVector c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t m = 0; m < basis.size(); ++m) {
    c[static_cast<Eigen::Index>(m)] = (basis[m].adjoint() * u).trace() / static_cast<double>(d);
  }
  return from_matrix(c * c.adjoint(), d);
}

ProcessMatrix ProcessMatrix::identity(int dim) {
  return from_unitary(ComplexMatrix::Identity(dim, dim));
}

double ProcessMatrix::min_eigenvalue() const { return hermitian_eig(chi_).values.minCoeff(); }

ProcessMatrix chi_cphase_ideal() { return ProcessMatrix::from_unitary(ideal_cphase_unitary()); }

ComplexMatrix apply_process(const ProcessMatrix& chi, const ComplexMatrix& rho) {
  const PauliBasis& basis = pauli_basis(qubits_for_dim(chi.dim()));
  if (rho.rows() != chi.dim() || rho.cols() != chi.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and process dimensions differ");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const ComplexMatrix left = basis[m] * rho;
    for (std::size_t n = 0; n < basis.size(); ++n) {
      const Complex c = chi.chi()(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      if (c != Complex{}) out += c * left * basis[n].adjoint();
    }
  }
  return out;
}

// --- state tomography -------------------------------------------------------

RealVector measurement_probabilities(const DensityMatrix& rho, const ProjectorSet& projs) {
  if (rho.dim() != projs.dim()) throw Error(ErrorKind::DimensionMismatch, "state and projector dimensions differ");
  const ComplexMatrix image = rho.matrix() * projs.ket_matrix();
  RealVector p(static_cast<Eigen::Index>(projs.size()));
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    p[k] = std::clamp(projs.ket_matrix().col(k).dot(image.col(k)).real(), 0.0, 1.0);
  }
  return p;
}

ComplexMatrix qst_linear_inversion(const Observations& data, const ProjectorSet& projs) {
  const Eigen::Index n = static_cast<Eigen::Index>(projs.size());
  if (data.counts.size() != n || data.durations.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "observation count does not match projector set");
  }
  const PauliBasis& basis = pauli_basis(projs.n_qubits());
  const Eigen::Index unknowns = static_cast<Eigen::Index>(basis.size());

  std::vector<Eigen::Index> used;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (data.durations[k] > 0.0) used.push_back(k);
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(used.size()), unknowns);
  RealVector rates(static_cast<Eigen::Index>(used.size()));
  for (std::size_t r = 0; r < used.size(); ++r) {
    const Eigen::Index k = used[r];
    const ComplexVector& v = projs[static_cast<std::size_t>(k)].ket;
    for (Eigen::Index m = 0; m < unknowns; ++m) {
      design(static_cast<Eigen::Index>(r), m) = v.dot(basis[static_cast<std::size_t>(m)] * v).real();
    }
    rates[static_cast<Eigen::Index>(r)] = data.counts[k] / data.durations[k];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < unknowns) {
    throw Error(ErrorKind::SingularDesign, "measured projectors span only " + std::to_string(qr.rank()) + " of " +
                                               std::to_string(unknowns) + " operator dimensions");
  }
  const RealVector x = qr.solve(rates);
  ComplexMatrix rho = ComplexMatrix::Zero(projs.dim(), projs.dim());
  for (Eigen::Index m = 0; m < unknowns; ++m) rho += x[m] * basis[static_cast<std::size_t>(m)];
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorKind::SingularDesign, "data carry no signal (non-positive trace)");
  return hermitian_part(rho / tr);
}

ComplexMatrix qst_linear_inversion(std::span<const CountRecord> records, const ProjectorSet& projs) {
  return qst_linear_inversion(Observations::from_records(records, projs), projs);
}

double log_likelihood(const ComplexMatrix& rho, const Observations& data, const ProjectorSet& projs) {
  const std::vector<LikelihoodGroup> groups{{projs.ket_matrix(), data.counts, data.durations}};
  return grouped_log_likelihood(rho, groups, nullptr);
}

StateMleResult qst_mle_detailed(const Observations& data, const ProjectorSet& projs, const MleOptions& options) {
  const ComplexMatrix linear = qst_linear_inversion(data, projs);
  const std::vector<LikelihoodGroup> groups{{projs.ket_matrix(), data.counts, data.durations}};
  MatrixObjective objective = [&groups](const ComplexMatrix& rho, ComplexMatrix* gradient) {
    return grouped_log_likelihood(rho, groups, gradient);
  };
  CholeskyFit fit =
      fit_over_cholesky(objective, projs.dim(), nearest_density(linear), kStateSeedMixing, options, "qst_mle");
  return {DensityMatrix::from_matrix(fit.rho), std::move(fit.history), fit.iterations};
}

DensityMatrix qst_mle(const Observations& data, const ProjectorSet& projs, const MleOptions& options) {
  return qst_mle_detailed(data, projs, options).state;
}

DensityMatrix qst_mle(std::span<const CountRecord> records, const ProjectorSet& projs, const MleOptions& options) {
  return qst_mle(Observations::from_records(records, projs), projs, options);
}

// --- process tomography -----------------------------------------------------

LinearProcessEstimate qpt_linear_inversion(std::span<const InputOutputPair> pairs) {
  const LinearSystem sys = process_design(pairs);
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(sys.design);
  if (qr.rank() < sys.design.cols()) {
    throw Error(ErrorKind::IncompleteInputSet, "inputs span only " + std::to_string(qr.rank()) + " of " +
                                                   std::to_string(sys.design.cols()) + " process dimensions");
  }
  const ComplexVector x = qr.solve(sys.rhs);
  const double residual = (sys.design * x - sys.rhs).norm();
  const Eigen::Index big = static_cast<Eigen::Index>(sys.dim) * sys.dim;
  const ComplexMatrix chi = Eigen::Map<const ComplexMatrix>(x.data(), big, big);
  return {ProcessMatrix::from_matrix(hermitian_part(chi), sys.dim), residual};
}

LinearProcessEstimate qpt_linear_inversion(std::span<const DensityMatrix> outputs) {
  const auto pairs = standard_pairs(outputs);
  return qpt_linear_inversion(std::span<const InputOutputPair>(pairs));
}

ProcessMleResult qpt_mle_detailed(std::span<const InputOutputPair> pairs, const MleOptions& options) {
  const LinearSystem sys = process_design(pairs);
  const LinearProcessEstimate linear = qpt_linear_inversion(pairs);
  const Eigen::Index big = static_cast<Eigen::Index>(sys.dim) * sys.dim;
  MatrixObjective objective = [&sys, big](const ComplexMatrix& chi, ComplexMatrix* gradient) {
    const ComplexVector residual = sys.design * Eigen::Map<const ComplexVector>(chi.data(), chi.size()) - sys.rhs;
    if (gradient) {
      const ComplexVector g = sys.design.adjoint() * residual;
      const ComplexMatrix gm = Eigen::Map<const ComplexMatrix>(g.data(), big, big);
      *gradient = -(gm + gm.adjoint());
    }
    return -residual.squaredNorm();
  };
  CholeskyFit fit = fit_over_cholesky(objective, static_cast<int>(big), nearest_density(linear.chi.chi()),
                                      kProcessSeedMixing, options, "qpt_mle");
  return {ProcessMatrix::from_matrix(fit.rho, sys.dim), std::move(fit.history), fit.iterations};
}

ProcessMatrix qpt_mle(std::span<const InputOutputPair> pairs, const MleOptions& options) {
  return qpt_mle_detailed(pairs, options).chi;
}

ProcessMatrix qpt_mle(std::span<const DensityMatrix> outputs, const MleOptions& options) {
  const auto pairs = standard_pairs(outputs);
  return qpt_mle(std::span<const InputOutputPair>(pairs), options);
}

ProcessMleResult qpt_mle_counts(std::span<const ComplexVector> inputs, std::span<const Observations> data,
                                const ProjectorSet& projs, const MleOptions& options) {
  if (inputs.size() != data.size() || inputs.empty()) {
    throw Error(ErrorKind::IncompleteInputSet, "need one observation set per input");
  }
  const int d = projs.dim();
  const PauliBasis& basis = pauli_basis(qubits_for_dim(d));
  const Eigen::Index big = static_cast<Eigen::Index>(basis.size());

  // p_jk = <v_k| E(psi_j) |v_k> = b^dagger chi b with b_m = conj(<v_k| A_m |psi_j>).
  std::vector<LikelihoodGroup> groups;
  std::vector<InputOutputPair> seed_pairs;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (inputs[j].size() != d) throw Error(ErrorKind::DimensionMismatch, "input ket dimension mismatch");
    const ComplexVector psi = inputs[j] / inputs[j].norm();
    LikelihoodGroup g{ComplexMatrix(big, static_cast<Eigen::Index>(projs.size())), data[j].counts,
                      data[j].durations};
    for (std::size_t k = 0; k < projs.size(); ++k) {
      for (Eigen::Index m = 0; m < big; ++m) {
        g.kets(m, static_cast<Eigen::Index>(k)) = std::conj(projs[k].ket.dot(basis[static_cast<std::size_t>(m)] * psi));
      }
    }
    groups.push_back(std::move(g));
    seed_pairs.push_back({psi * psi.adjoint(), nearest_density(qst_linear_inversion(data[j], projs))});
  }
  const LinearProcessEstimate linear = qpt_linear_inversion(seed_pairs);
  MatrixObjective objective = [&groups](const ComplexMatrix& chi, ComplexMatrix* gradient) {
    return grouped_log_likelihood(chi, groups, gradient);
  };
  CholeskyFit fit = fit_over_cholesky(objective, static_cast<int>(big), nearest_density(linear.chi.chi()),
                                      kStateSeedMixing, options, "qpt_mle_counts");
  return {ProcessMatrix::from_matrix(fit.rho, d), std::move(fit.history), fit.iterations};
}

ComplexMatrix chi_to_superoperator(const ProcessMatrix& chi) {
  const ComplexMatrix& basis = superoperator_basis(chi.dim());
  const ComplexVector s = basis * Eigen::Map<const ComplexVector>(chi.chi().data(), chi.chi().size());
  const Eigen::Index n = static_cast<Eigen::Index>(chi.dim()) * chi.dim();
  return Eigen::Map<const ComplexMatrix>(s.data(), n, n);
}

ComplexMatrix superoperator_to_chi_matrix(const ComplexMatrix& superop, int dim) {
  const ComplexMatrix& basis = superoperator_basis(dim);
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  if (superop.rows() != n || superop.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "superoperator size does not match dimension");
  }
  const ComplexVector c =
      basis.adjoint() * Eigen::Map<const ComplexVector>(superop.data(), superop.size()) / static_cast<double>(n);
  return Eigen::Map<const ComplexMatrix>(c.data(), n, n);
}

ProcessMatrix superoperator_to_chi(const ComplexMatrix& superop, int dim) {
  return ProcessMatrix::from_matrix(hermitian_part(superoperator_to_chi_matrix(superop, dim)), dim);
}

ProcessMatrix compose_processes(const ProcessMatrix& outer, const ProcessMatrix& inner) {
  if (outer.dim() != inner.dim()) throw Error(ErrorKind::DimensionMismatch, "cannot compose processes of different dimension");
  return superoperator_to_chi(chi_to_superoperator(outer) * chi_to_superoperator(inner), outer.dim());
}

ProcessMatrix deconvolve_input_imperfection(const ProcessMatrix& chi_total, const ProcessMatrix& chi_input) {
  if (chi_total.dim() != chi_input.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "cannot deconvolve processes of different dimension");
  }
  const ComplexMatrix s_input = chi_to_superoperator(chi_input);
  Eigen::JacobiSVD<ComplexMatrix> svd(s_input, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const double smax = sigma[0];
  const double smin = sigma[sigma.size() - 1];
  const double condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(condition < kMaxDeconvolutionCondition)) {
    throw IllConditionedError("input channel cannot be inverted", condition);
  }
  RealVector inv = RealVector::Zero(sigma.size());
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > kPinvRelativeCutoff * smax) inv[k] = 1.0 / sigma[k];
  }
  const ComplexMatrix pinv = svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
  const ComplexMatrix gate = chi_to_superoperator(chi_total) * pinv;
  const ComplexMatrix chi = hermitian_part(superoperator_to_chi_matrix(gate, chi_total.dim()));
  return ProcessMatrix::from_matrix(nearest_density(chi), chi_total.dim());
}

ProcessMatrix build_chi_input(std::span<const DensityMatrix> measured_inputs, const ComplexMatrix& ideal_gate) {
  const auto& inputs = tomography_input_set();
  if (measured_inputs.size() != inputs.size()) {
    throw Error(ErrorKind::IncompleteInputSet,
                "expected 16 measured inputs, got " + std::to_string(measured_inputs.size()));
  }
  std::vector<InputOutputPair> pairs;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (measured_inputs[j].dim() != ideal_gate.rows()) {
      throw Error(ErrorKind::DimensionMismatch, "measured input dimension does not match the gate");
    }
    pairs.push_back({inputs[j].state().matrix(),
                     hermitian_part(ideal_gate * measured_inputs[j].matrix() * ideal_gate.adjoint())});
  }
  return qpt_mle(std::span<const InputOutputPair>(pairs));
}

ProcessMatrix input_error_channel(const ProcessMatrix& chi_input, const ComplexMatrix& ideal_gate) {
  return compose_processes(ProcessMatrix::from_unitary(ideal_gate.adjoint()), chi_input);
}

BootstrapSummary parametric_bootstrap(std::span<const Observations> data, int replicas, std::uint64_t seed,
                                      const std::function<double(std::span<const Observations>)>& statistic) {
  if (replicas < 2) throw Error(ErrorKind::InvalidArgument, "bootstrap needs at least two replicas");
  std::mt19937_64 rng(seed);
  BootstrapSummary out;
  out.replicas.reserve(static_cast<std::size_t>(replicas));
  std::vector<Observations> copy(data.begin(), data.end());
  for (int r = 0; r < replicas; ++r) {
    for (std::size_t j = 0; j < data.size(); ++j) {
      for (Eigen::Index k = 0; k < data[j].counts.size(); ++k) {
        const double mean = data[j].counts[k];
        copy[j].counts[k] = mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(rng)) : 0.0;
      }
    }
    out.replicas.push_back(statistic(copy));
  }
  double sum = 0.0;
  for (double v : out.replicas) sum += v;
  out.mean = sum / replicas;
  double sq = 0.0;
  for (double v : out.replicas) sq += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(sq / (replicas - 1));
  return out;
}

}  // namespace tbq
