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

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "thermoscape/hamiltonian.hpp"
#include "thermoscape/operator_core.hpp"

using namespace thermoscape;
using testing_support::random_density;
using testing_support::random_hermitian;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (auto row : rows) {
    Eigen::Index c = 0;
    for (auto v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

}  // namespace

TEST(PauliMatrix, SingleZ) {
  Matrix z = pauli_matrix({1.0, "Z"}, 1);
  EXPECT_LT((z - from_rows({{1, 0}, {0, -1}})).norm(), 1e-15);
}

TEST(PauliMatrix, ScaledIdentity) {
  EXPECT_LT((pauli_matrix({3.0, "II"}, 2) - 3.0 * Matrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(PauliMatrix, XZSquaresToIdentityAndMatchesKron) {
  Matrix xz = pauli_matrix({1.0, "XZ"}, 2);
  EXPECT_LT((xz * xz - Matrix::Identity(4, 4)).norm(), 1e-12);
  Matrix x = from_rows({{0, 1}, {1, 0}});
  Matrix z = from_rows({{1, 0}, {0, -1}});
  EXPECT_LT((xz - kron(x, z)).norm(), 1e-15);
}

TEST(PauliMatrix, Errors) {
  try {
    pauli_matrix({1.0, "XZ"}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
  try {
    pauli_matrix({1.0, std::string(15, 'I')}, 15);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
  }
}

TEST(PauliMatrix, SingleLettersAreHermitianInvolutions) {
  for (const char* s : {"XYZ", "YYI", "ZIX", "IIY", "XXX"}) {
    Matrix p = pauli_matrix({1.0, s}, 3);
    EXPECT_LT((p * p - Matrix::Identity(8, 8)).norm(), 1e-12) << s;
    EXPECT_LT((p - p.adjoint()).norm(), 1e-12) << s;
  }
}

TEST(KronEmbed, SingleSites) {
  Matrix x = pauli_letter('X');
  Matrix i2 = Matrix::Identity(2, 2);
  EXPECT_LT((kron_embed(x, {0}, 2) - kron(x, i2)).norm(), 1e-15);
  EXPECT_LT((kron_embed(x, {1}, 2) - kron(i2, x)).norm(), 1e-15);
}

TEST(KronEmbed, ReversedCnotMatchesBruteForcePermutation) {
  // Control is the op's first factor; placed on site 1, target on site 0.
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  Matrix e = kron_embed(cnot, {1, 0}, 2);
  Matrix expected = Matrix::Zero(4, 4);
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b0 = 0; b0 < 2; ++b0) {
      // Basis |q0 q1> with qubit 0 the most significant bit.
      const int in = b0 * 2 + b1;
      const int out = (b0 ^ b1) * 2 + b1;
      expected(out, in) = 1.0;
    }
  }
  EXPECT_LT((e - expected).norm(), 1e-15);
}

TEST(KronEmbed, Errors) {
  Matrix x = pauli_letter('X');
  try {
    kron_embed(x, {2}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SiteOutOfRange);
  }
  try {
    kron_embed(x, {0, 1}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(HermEig, PauliSpectra) {
  auto ez = herm_eig(pauli_letter('Z'));
  EXPECT_NEAR(ez.values(0), -1.0, 1e-14);
  EXPECT_NEAR(ez.values(1), 1.0, 1e-14);
  auto ex = herm_eig(pauli_letter('X'));
  EXPECT_NEAR(ex.values(0), -1.0, 1e-14);
  EXPECT_NEAR(ex.values(1), 1.0, 1e-14);
  const double s = 1.0 / std::sqrt(2.0);
  Vector minus(2), plus(2);
  minus << s, -s;
  plus << s, s;
  EXPECT_NEAR(std::abs(ex.vectors.col(0).dot(minus)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(ex.vectors.col(1).dot(plus)), 1.0, 1e-12);
}

TEST(HermEig, ReconstructionAndPhaseConvention) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index dim = trial < 10 ? 4 : 16;
    Matrix m = random_hermitian(dim, rng);
    auto e = herm_eig(m);
    Matrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE(op_norm(rec - m), 1e-9 * op_norm(m));
    EXPECT_LT((e.vectors.adjoint() * e.vectors - Matrix::Identity(dim, dim)).norm(), 1e-10);
    for (Eigen::Index i = 1; i < dim; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
    for (Eigen::Index c = 0; c < dim; ++c) {
      Eigen::Index best = 0;
      e.vectors.col(c).cwiseAbs().maxCoeff(&best);
      EXPECT_NEAR(e.vectors(best, c).imag(), 0.0, 1e-14);
      EXPECT_GT(e.vectors(best, c).real(), 0.0);
    }
  }
}

TEST(HermEig, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    herm_eig(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(DensityMatrix, Validation) {
  Matrix bad = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix::from_matrix(bad), Error);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix::from_matrix(neg), Error);
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(4));
}

TEST(Expectation, Basics) {
  Matrix z = pauli_letter('Z');
  EXPECT_NEAR(expectation(z, DensityMatrix::basis_state(2, 0)), 1.0, 1e-15);
  EXPECT_NEAR(expectation(z, DensityMatrix::maximally_mixed(2)), 0.0, 1e-15);
}

TEST(Expectation, IsingBitStringEnergies) {
  auto h = build_ising_chain(3, 0.0, true);
  for (int idx = 0; idx < 8; ++idx) {
    const std::string bits = index_bitstring(idx, 3);
    EXPECT_NEAR(expectation(h.dense, DensityMatrix::basis_state(8, idx)),
                testing_support::ising_bitstring_energy(bits, 0.0, true), 1e-12)
        << bits;
  }
  EXPECT_NEAR(expectation(h.dense, DensityMatrix::basis_state(8, bitstring_index("010"))), 1.0, 1e-12);
}

TEST(Expectation, Linearity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix o1 = random_hermitian(4, rng), o2 = random_hermitian(4, rng);
    auto r1 = DensityMatrix::from_matrix(random_density(4, rng));
    auto r2 = DensityMatrix::from_matrix(random_density(4, rng));
    const double a = 0.3;
    auto mix = DensityMatrix::from_matrix(a * r1.mat() + (1 - a) * r2.mat());
    EXPECT_NEAR(expectation(o1 + 2.0 * o2, r1), expectation(o1, r1) + 2.0 * expectation(o2, r1), 1e-10);
    EXPECT_NEAR(expectation(o1, mix), a * expectation(o1, r1) + (1 - a) * expectation(o1, r2), 1e-10);
  }
}

TEST(Expectation, Errors) {
  try {
    expectation(pauli_letter('Z'), DensityMatrix::maximally_mixed(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  Matrix rho = Matrix::Constant(2, 2, 0.5);
  try {
    expectation(skew, DensityMatrix::from_matrix(rho));
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::NotHermitian || e.kind() == ErrorKind::NonRealExpectation);
  }
}
