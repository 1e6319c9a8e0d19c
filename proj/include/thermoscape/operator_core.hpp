// Copyright 2026 The Thermoscape Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/** @file
 * Dense complex operators on qubit registers: Pauli strings, tensor
 * embeddings, Hermitian eigendecomposition and density matrices.
 *
 * Qubit 0 is the most significant bit of a computational-basis index, so
 * kron_embed(X, {0}, 2) == X (x) I.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "thermoscape/error.hpp"

namespace thermoscape {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Dense-size guard: at most 14 qubits (Hilbert dimension 16384).
inline constexpr int kMaxQubits = 14;

/// Relative Hermiticity tolerance applied to Frobenius norms.
inline constexpr double kHermTol = 1e-10;

inline void check_qubit_count(int n) {
  if (n < 0) fail(ErrorKind::InvalidArgument, "negative qubit count");
  if (n > kMaxQubits) {
    fail(ErrorKind::SizeLimit, std::to_string(n) + " qubits exceeds the dense limit of " +
                                   std::to_string(kMaxQubits));
  }
}

inline std::int64_t qubit_dim(int n) {
  check_qubit_count(n);
  return std::int64_t{1} << n;
}

inline void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
}

inline void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorKind::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

inline void check_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorKind::DimensionMismatch, std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                                           std::to_string(a.cols()) + " vs " +
                                           std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/// Frobenius norm of m - m^dagger.
inline double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).norm(); }

inline bool is_hermitian(const Matrix& m, double rel_tol = kHermTol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= rel_tol * m.norm();
}

inline void require_hermitian(const Matrix& m, const char* what, double rel_tol = kHermTol) {
  check_square(m, what);
  if (!is_hermitian(m, rel_tol)) {
    fail(ErrorKind::NotHermitian, std::string(what) + " is not Hermitian (defect " +
                                      std::to_string(hermiticity_defect(m)) + ")");
  }
}

/// Spectral (operator 2-) norm.
inline double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && hermiticity_defect(m) <= 1e-14 * m.norm()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double max_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Trace norm of a Hermitian matrix (sum of absolute eigenvalues).
inline double trace_norm(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Pauli strings

/// Real-weighted Pauli string, e.g. {0.5, "XZI"}.
struct PauliTerm {
  double coefficient = 1.0;
  std::string letters;
};

inline Matrix pauli_letter(char letter) {
  Matrix m = Matrix::Zero(2, 2);
  const Complex i{0.0, 1.0};
  switch (letter) {
    case 'I': m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 'X': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 'Y': m(0, 1) = -i; m(1, 0) = i; break;
    case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default:
      fail(ErrorKind::InvalidArgument, std::string("unknown Pauli letter '") + letter + "'");
  }
  return m;
}

inline Matrix pauli_matrix(const PauliTerm& term, int n) {
  if (static_cast<int>(term.letters.size()) != n) {
    fail(ErrorKind::DimensionMismatch, "Pauli string '" + term.letters + "' has length " +
                                           std::to_string(term.letters.size()) + ", expected " +
                                           std::to_string(n));
  }
  check_qubit_count(n);
  const std::int64_t dim = qubit_dim(n);
  // Pauli strings are monomial: one nonzero per row.
  Matrix out = Matrix::Zero(dim, dim);
  for (std::int64_t row = 0; row < dim; ++row) {
    std::int64_t col = 0;
    Complex value = term.coefficient;
    for (int q = 0; q < n; ++q) {
      const int shift = n - 1 - q;
      const int bit = static_cast<int>((row >> shift) & 1);
      switch (term.letters[q]) {
        case 'I': col |= std::int64_t{bit} << shift; break;
        case 'X': col |= std::int64_t{bit ^ 1} << shift; break;
        case 'Y':
          col |= std::int64_t{bit ^ 1} << shift;
          value *= bit == 0 ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
          break;
        case 'Z':
          col |= std::int64_t{bit} << shift;
          if (bit == 1) value = -value;
          break;
        default:
          fail(ErrorKind::InvalidArgument, "unknown Pauli letter in '" + term.letters + "'");
      }
    }
    out(row, col) = value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding few-qubit operators

/// Acts as `op` on `sites` (op's first tensor factor on sites[0]) and as the
/// identity on every other qubit of an n-qubit register.
inline Matrix kron_embed(const Matrix& op, std::span<const int> sites, int n) {
  check_qubit_count(n);
  const int k = static_cast<int>(sites.size());
  if (k > n) fail(ErrorKind::DimensionMismatch, "more sites than qubits");
  if (op.rows() != op.cols() || op.rows() != (std::int64_t{1} << k)) {
    fail(ErrorKind::DimensionMismatch, "operator of dimension " + std::to_string(op.rows()) +
                                           " cannot act on " + std::to_string(k) + " sites");
  }
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int s : sites) {
    if (s < 0 || s >= n) {
      fail(ErrorKind::SiteOutOfRange, "site " + std::to_string(s) + " outside [0, " +
                                          std::to_string(n) + ")");
    }
    if (used[static_cast<std::size_t>(s)]) {
      fail(ErrorKind::InvalidArgument, "duplicate site " + std::to_string(s));
    }
    used[static_cast<std::size_t>(s)] = true;
  }
  const std::int64_t dim = std::int64_t{1} << n;
  const std::int64_t local = std::int64_t{1} << k;

  std::vector<std::int64_t> local_offset(static_cast<std::size_t>(local), 0);
  for (std::int64_t l = 0; l < local; ++l) {
    std::int64_t off = 0;
    for (int q = 0; q < k; ++q) {
      if ((l >> (k - 1 - q)) & 1) off |= std::int64_t{1} << (n - 1 - sites[q]);
    }
    local_offset[static_cast<std::size_t>(l)] = off;
  }
  std::int64_t site_mask = 0;
  for (int s : sites) site_mask |= std::int64_t{1} << (n - 1 - s);

  Matrix out = Matrix::Zero(dim, dim);
  for (std::int64_t rest = 0; rest < dim; ++rest) {
    if (rest & site_mask) continue;
    for (std::int64_t r = 0; r < local; ++r) {
      const std::int64_t row = rest | local_offset[static_cast<std::size_t>(r)];
      for (std::int64_t c = 0; c < local; ++c) {
        const Complex v = op(r, c);
        if (v != Complex{0.0, 0.0}) out(row, rest | local_offset[static_cast<std::size_t>(c)]) = v;
      }
    }
  }
  return out;
}

inline Matrix kron_embed(const Matrix& op, std::initializer_list<int> sites, int n) {
  return kron_embed(op, std::span<const int>(sites.begin(), sites.size()), n);
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition

struct EigenDecomposition {
  RealVector values;  ///< ascending
  Matrix vectors;     ///< columns are orthonormal eigenvectors
};

/// Eigenvector phases are fixed so that each column's largest-magnitude
/// component is real and positive.
inline EigenDecomposition herm_eig(const Matrix& m, double rel_tol = kHermTol) {
  require_hermitian(m, "herm_eig input", rel_tol);
  check_finite(m, "herm_eig input");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) fail(ErrorKind::InvalidArgument, "eigensolver did not converge");
  EigenDecomposition out{es.eigenvalues(), es.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    Eigen::Index best = 0;
    out.vectors.col(c).cwiseAbs().maxCoeff(&best);
    const Complex pivot = out.vectors(best, c);
    if (std::abs(pivot) > 0.0) out.vectors.col(c) *= std::conj(pivot) / std::abs(pivot);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Density matrices

/// Trace-one positive semidefinite matrix, validated on construction.
class DensityMatrix {
 public:
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPsdFloor = -1e-9;

  static DensityMatrix from_matrix(Matrix mat) {
    check_square(mat, "density matrix");
    check_finite(mat, "density matrix");
    if (!is_hermitian(mat)) {
      fail(ErrorKind::InvalidState, "density matrix is not Hermitian (defect " +
                                        std::to_string(hermiticity_defect(mat)) + ")");
    }
    const double tr = mat.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
      fail(ErrorKind::InvalidState, "density matrix trace " + std::to_string(tr) + " != 1");
    }
    const double lmin = min_eigenvalue(mat);
    if (lmin < kPsdFloor) {
      fail(ErrorKind::InvalidState, "density matrix has eigenvalue " + std::to_string(lmin));
    }
    return DensityMatrix(std::move(mat));
  }

  static DensityMatrix pure(const Vector& psi) {
    const double nrm = psi.norm();
    if (!(nrm > 0.0)) fail(ErrorKind::InvalidState, "zero state vector");
    const Vector v = psi / nrm;
    return DensityMatrix(v * v.adjoint());
  }

  static DensityMatrix basis_state(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) fail(ErrorKind::InvalidArgument, "basis index out of range");
    Matrix m = Matrix::Zero(dim, dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    if (dim < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
    return DensityMatrix(identity(dim) / static_cast<double>(dim));
  }

  /// Skips validation; the caller has already established the invariants.
  static DensityMatrix assume_valid(Matrix mat) { return DensityMatrix(std::move(mat)); }

  const Matrix& mat() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

 private:
  explicit DensityMatrix(Matrix mat) : mat_(std::move(mat)) {}
  Matrix mat_;
};

/// Tr(A B) without forming the product.
inline Complex trace_product(const Matrix& a, const Matrix& b) {
  return (a.transpose().cwiseProduct(b)).sum();
}

/// Tr(obs rho) for Hermitian obs; rejects a non-negligible imaginary part.
inline double expectation(const Matrix& obs, const DensityMatrix& rho) {
  check_same_dim(obs, rho.mat(), "expectation");
  require_hermitian(obs, "observable");
  const Complex value = trace_product(obs, rho.mat());
  if (std::abs(value.imag()) > 1e-9 * std::max(op_norm(obs), 1e-300)) {
    fail(ErrorKind::NonRealExpectation, "imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

/// Re Tr(obs rho) for an observable already known to be Hermitian.
inline double real_trace_product(const Matrix& obs, const Matrix& rho) {
  return trace_product(obs, rho).real();
}

/// Computational basis projector |index><index| of dimension dim.
inline Matrix basis_projector(Eigen::Index dim, Eigen::Index index) {
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return m;
}

/// Index of a bit string such as "0110" (qubit 0 first).
inline std::int64_t bitstring_index(const std::string& bits) {
  std::int64_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') fail(ErrorKind::InvalidArgument, "bit string '" + bits + "'");
    idx = (idx << 1) | (c == '1' ? 1 : 0);
  }
  return idx;
}

inline std::string index_bitstring(std::int64_t index, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q) {
    if ((index >> (n - 1 - q)) & 1) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

}  // namespace thermoscape
