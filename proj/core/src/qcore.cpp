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

#include "tbq/qcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "tbq/errors.hpp"

namespace tbq {

namespace {

void require_hermitian(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(who) + ": matrix is not square");
  }
  if (!is_hermitian(m)) {
    throw Error(ErrorKind::NotHermitian, std::string(who) + ": input is not Hermitian");
  }
}

ComplexMatrix reassemble(const EigenDecomposition& eig, const RealVector& values) {
  return hermitian_part(eig.vectors * values.cast<Complex>().asDiagonal() *
                        eig.vectors.adjoint());
}

// Euclidean projection onto {x : x >= 0, sum x = 1}; input sorted descending.
RealVector project_to_simplex(const RealVector& sorted_desc) {
  const Eigen::Index n = sorted_desc.size();
  double cumulative = 0.0;
  double shift = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted_desc[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted_desc[k] - candidate > 0.0) shift = candidate;
  }
  return (sorted_desc.array() - shift).cwiseMax(0.0).matrix();
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  const double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= rel_tol * scale;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index br = b.rows();
  const Eigen::Index bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "hermitian_eig: eigensolver failed");
  }
  // Eigen returns ascending order.
  const Eigen::Index n = m.rows();
  EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()[n - 1 - k];
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

ComplexMatrix nearest_psd(const ComplexMatrix& m) {
  const EigenDecomposition eig = hermitian_eig(m);
  if (eig.values.minCoeff() >= 0.0) return hermitian_part(m);
  return reassemble(eig, eig.values.cwiseMax(0.0));
}

ComplexMatrix nearest_density(const ComplexMatrix& m) {
  const EigenDecomposition eig = hermitian_eig(m);
  return reassemble(eig, project_to_simplex(eig.values));
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const EigenDecomposition eig = hermitian_eig(m);
  return reassemble(eig, eig.values.cwiseMax(0.0).cwiseSqrt());
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix must be 2x2 or 4x4");
  }
  if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, "density matrix has non-finite entries");
  if (!is_hermitian(m, kHermitianTol)) {
    throw Error(ErrorKind::NotHermitian, "density matrix is not Hermitian");
  }
  const Complex tr = m.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
    throw Error(ErrorKind::InvalidArgument,
                "density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  ComplexMatrix h = hermitian_part(m);
  if (hermitian_eig(h).values.minCoeff() < kEigenvalueFloor) {
    throw Error(ErrorKind::InvalidArgument, "density matrix has a negative eigenvalue");
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& ket) {
  const double n = ket.norm();
  if (n < 1e-300) throw Error(ErrorKind::ZeroParameter, "cannot build a state from a zero ket");
  const ComplexVector k = ket / n;
  ComplexMatrix rho = k * k.adjoint();
  rho /= rho.trace().real();
  return from_matrix(hermitian_part(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return from_matrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

namespace pauli {
ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

PauliBasis::PauliBasis(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) {
    throw Error(ErrorKind::InvalidArgument, "PauliBasis supports 1 or 2 qubits");
  }
  const std::array<ComplexMatrix, 4> single{pauli::I(), pauli::X(), pauli::Y(), pauli::Z()};
  constexpr std::array<char, 4> names{'I', 'X', 'Y', 'Z'};
  if (n_qubits == 1) {
    for (int a = 0; a < 4; ++a) {
      ops_.push_back(single[a]);
      labels_.emplace_back(1, names[a]);
    }
    return;
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      ops_.push_back(tensor_product(single[a], single[b]));
      labels_.push_back(std::string{names[a], names[b]});
    }
  }
}

std::size_t PauliBasis::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorKind::InvalidArgument, "unknown Pauli label " + label);
  return static_cast<std::size_t>(it - labels_.begin());
}

const PauliBasis& pauli_basis(int n_qubits) {
  static const PauliBasis one(1);
  static const PauliBasis two(2);
  if (n_qubits == 1) return one;
  if (n_qubits == 2) return two;
  throw Error(ErrorKind::InvalidArgument, "pauli_basis supports 1 or 2 qubits");
}

ComplexMatrix cholesky_factor_from_params(std::span<const double> t, int dim) {
  if (dim <= 0 || t.size() != static_cast<std::size_t>(cholesky_param_count(dim))) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(cholesky_param_count(dim)) + " Cholesky parameters, got " +
                    std::to_string(t.size()));
  }
  ComplexMatrix lower = ComplexMatrix::Zero(dim, dim);
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i) lower(i, i) = t[k++];
  for (int i = 1; i < dim; ++i) {
    for (int j = 0; j < i; ++j) {
      lower(i, j) = Complex(t[k], t[k + 1]);
      k += 2;
    }
  }
  return lower;
}

RealVector params_from_cholesky_factor(const ComplexMatrix& lower) {
  const int dim = static_cast<int>(lower.rows());
  RealVector t(cholesky_param_count(dim));
  Eigen::Index k = 0;
  for (int i = 0; i < dim; ++i) t[k++] = lower(i, i).real();
  for (int i = 1; i < dim; ++i) {
    for (int j = 0; j < i; ++j) {
      t[k++] = lower(i, j).real();
      t[k++] = lower(i, j).imag();
    }
  }
  return t;
}

ComplexMatrix psd_from_cholesky_params(std::span<const double> t, int dim) {
  for (double v : t) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite Cholesky parameter");
  }
  // The result is scale invariant; normalising first keeps T^dagger T finite.
  double scale = 0.0;
  for (double v : t) scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0)) throw Error(ErrorKind::ZeroParameter, "Cholesky parameters are all zero");
  const ComplexMatrix lower = cholesky_factor_from_params(t, dim) / scale;
  ComplexMatrix a = lower.adjoint() * lower;
  const double tr = a.trace().real();
  if (!(tr >= 1e-300)) throw Error(ErrorKind::ZeroParameter, "Cholesky parameters have zero norm");
  return hermitian_part(a / tr);
}

RealVector cholesky_params_for(const ComplexMatrix& m, double eps) {
  require_hermitian(m, "cholesky_params_for");
  const Eigen::Index n = m.rows();
  const double tr = std::max(m.trace().real(), 1e-300);
  ComplexMatrix regular =
      nearest_psd(m) + ComplexMatrix::Identity(n, n) * (eps * tr / static_cast<double>(n));
  // Factor the index-reversed matrix so that T = (J L J)^dagger is lower
  // triangular and T^dagger T = regular.
  const ComplexMatrix reversed = regular.colwise().reverse().rowwise().reverse();
  Eigen::LLT<ComplexMatrix> llt(reversed);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "cholesky_params_for: factorisation failed");
  }
  const ComplexMatrix l = llt.matrixL();
  const ComplexMatrix upper = l.colwise().reverse().rowwise().reverse();
  return params_from_cholesky_factor(upper.adjoint());
}

DensityMatrix state_from_cholesky_params(std::span<const double> t, int dim) {
  return DensityMatrix::from_matrix(psd_from_cholesky_params(t, dim));
}

}  // namespace tbq
