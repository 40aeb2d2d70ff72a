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

#ifndef TBQ_QCORE_HPP
#define TBQ_QCORE_HPP

// Complex linear algebra and quantum primitives shared by every other module.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tbq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-10;

bool all_finite(const ComplexMatrix& m);

/// True when ||m - m^dagger||_F <= rel_tol * max(1, ||m||_F).
bool is_hermitian(const ComplexMatrix& m, double rel_tol = kHermitianTolerance);

/// Returns (m + m^dagger) / 2. Callers use this to scrub round-off after
/// products that are Hermitian in exact arithmetic.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);

struct EigenDecomposition {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns pair with values
};

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitian.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// Clips negative eigenvalues to zero. Throws NotHermitian.
ComplexMatrix nearest_psd(const ComplexMatrix& m);

/// Frobenius-nearest PSD matrix with unit trace (eigenvalues projected onto
/// the probability simplex). Throws NotHermitian.
ComplexMatrix nearest_density(const ComplexMatrix& m);

/// Principal square root of a PSD matrix; small negative eigenvalues are
/// treated as zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;

  /// Validates every invariant (dim 2 or 4, Hermitian, PSD, unit trace) and
  /// throws on violation. Round-off asymmetry is removed before storing.
  static DensityMatrix from_matrix(const ComplexMatrix& m);
  static DensityMatrix from_pure(const ComplexVector& ket);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class PauliBasis {
 public:
  /// n_qubits must be 1 or 2. Operators are ordered lexicographically over
  /// {I, X, Y, Z}, first factor most significant: II, IX, IY, IZ, XI, ...
  explicit PauliBasis(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  int dim() const noexcept { return 1 << n_qubits_; }
  std::size_t size() const noexcept { return ops_.size(); }
  const ComplexMatrix& operator[](std::size_t i) const { return ops_[i]; }
  const std::vector<ComplexMatrix>& operators() const noexcept { return ops_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// Index of a label such as "ZI".
  std::size_t index_of(const std::string& label) const;

 private:
  int n_qubits_;
  std::vector<ComplexMatrix> ops_;
  std::vector<std::string> labels_;
};

/// Shared immutable instances for 1 and 2 qubits.
const PauliBasis& pauli_basis(int n_qubits);

namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

/// Number of real parameters in the Cholesky packing for a dim x dim matrix.
inline constexpr int cholesky_param_count(int dim) { return dim * dim; }

/// Lower-triangular T from packed parameters. Layout: the dim real diagonal
/// entries first, then (re, im) for each strictly-lower entry in row-major
/// order.
ComplexMatrix cholesky_factor_from_params(std::span<const double> t, int dim);

/// Inverse of the packing above for a lower-triangular T.
RealVector params_from_cholesky_factor(const ComplexMatrix& lower);

/// T^dagger T / Tr(T^dagger T) for any dimension. Throws ZeroParameter when the
/// trace underflows.
ComplexMatrix psd_from_cholesky_params(std::span<const double> t, int dim);

/// Packed parameters whose T^dagger T reproduces m (PSD, any trace). A
/// multiple of the identity, eps * Tr(m) / dim, is mixed in first so the
/// factorisation exists for rank-deficient input.
RealVector cholesky_params_for(const ComplexMatrix& m, double eps = 1e-6);

DensityMatrix state_from_cholesky_params(std::span<const double> t, int dim);

}  // namespace tbq

#endif  // TBQ_QCORE_HPP
