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

#include <unsupported/Eigen/MatrixFunctions>

#include "test_support.hpp"
#include "thermoscape/lindblad.hpp"

using namespace thermoscape;
using namespace testing_support;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST(Dissipator, IdentityIsAnnihilated) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    auto model = random_model(2, 2, rng, finite_config(1.0, 8.0));
    for (std::size_t a = 0; a < model.num_jumps(); ++a) {
      EXPECT_LT(dissipative_adjoint(model, a, Matrix::Identity(4, 4)).norm(), 1e-9);
    }
  }
}

TEST(Dissipator, NormBoundDualityAndTrace) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    auto model = random_model(2, 1, rng, finite_config(0.5 + 0.1 * trial, 3.0 + trial % 7));
    const Matrix& a = model.jump(0).op;
    const double aa = op_norm(a.adjoint() * a);
    Matrix obs = random_hermitian(4, rng);
    Matrix out = dissipative_adjoint(model, 0, obs);
    EXPECT_LE(op_norm(out), 2.0 * aa * op_norm(obs) + 1e-9);
    EXPECT_LT(hermiticity_defect(out), 1e-8 * obs.norm());
    Matrix rho = random_density(4, rng);
    const Complex lhs = trace_product(out, rho);
    const Complex rhs = trace_product(obs, model.dissipative_apply(0, rho));
    EXPECT_LT(std::abs(lhs - rhs), 1e-8);
    EXPECT_LT(std::abs(model.dissipative_apply(0, rho).trace()), 1e-9);
  }
}

TEST(Davies, QubitAdjointOnHamiltonian) {
  auto model = qubit_model(davies_config(10.0));
  const double gm = gamma(-1.0, 10.0, 1.0), gp = gamma(1.0, 10.0, 1.0);
  Matrix want = diag2(gp, -gm);  // gamma(1)|0><0| - gamma(-1)|1><1|
  Matrix got = davies_adjoint(model, 0, model.hamiltonian().dense);
  EXPECT_LT((got - want).norm(), 1e-12);
  // Oracle: sum_nu nu gamma(nu) A_nu^dag A_nu.
  Matrix sum = Matrix::Zero(2, 2);
  const auto& bl = model.jump(0).blocks;
  for (std::size_t k = 0; k < bl.size(); ++k) sum += bl.nus[k] * gamma(bl.nus[k], 10.0, 1.0) * bl.blocks[k].adjoint() * bl.blocks[k];
  EXPECT_LT((got - sum).norm(), 1e-10);
  EXPECT_LT(davies_adjoint(model, 0, Matrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Davies, ZeroTemperatureIsNonHeating) {
  std::mt19937_64 rng(3);
  auto cfg = davies_config(0.0);
  cfg.zero_temperature = true;
  for (int trial = 0; trial < 10; ++trial) {
    auto model = random_model(2, 2, rng, cfg);
    for (std::size_t a = 0; a < model.num_jumps(); ++a) {
      EXPECT_LE(max_eigenvalue(davies_adjoint(model, a, model.hamiltonian().dense)), 1e-12);
    }
  }
}

TEST(Davies, RequiresDaviesModel) {
  auto model = qubit_model(finite_config(1.0, 5.0));
  EXPECT_THROW(davies_adjoint(model, 0, Matrix::Identity(2, 2)), Error);
}

TEST(Generator, DaviesQubitClosedForms) {
  auto model = qubit_model(davies_config(10.0));
  const double gm = gamma(-1.0, 10.0, 1.0), gp = gamma(1.0, 10.0, 1.0);
  auto w = WeightVector::unit(1, 0);
  Matrix out = model.generator_apply(w, diag2(0.0, 1.0));
  EXPECT_LT((out - gm * diag2(1.0, -1.0)).norm(), 1e-14);
  // Detailed balance: diag(gamma(-J), gamma(J)) normalized is stationary.
  Matrix fixed = diag2(gm, gp) / (gm + gp);
  EXPECT_LT(model.generator_apply(w, fixed).norm(), 1e-8);
}

TEST(Generator, InfiniteTemperatureStructure) {
  std::vector<LabeledJump> jumps;
  for (const char* p : {"XI", "IZ", "YY"}) jumps.push_back({p, pauli_matrix({1.0, p}, 2)});
  std::mt19937_64 rng(4);
  Matrix h = random_hermitian(4, rng);
  LindbladModel model(from_dense(h), jumps, finite_config(0.0, 4.0));
  Matrix out = model.generator_apply(WeightVector::uniform(3), Matrix::Identity(4, 4) / 4.0, true);
  EXPECT_LT(std::abs(out.trace()), 1e-9);
  EXPECT_LT(hermiticity_defect(out), 1e-9);
}

TEST(Generator, TraceFreeOnRandomStates) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto model = random_model(2, 2, rng, finite_config(2.0, 6.0));
    Matrix rho = random_density(4, rng);
    Matrix out = model.generator_apply(WeightVector{{0.3, 0.9}}, rho, trial % 2 == 0);
    EXPECT_LT(std::abs(out.trace()), 1e-9);
    EXPECT_LT(hermiticity_defect(out), 1e-9);
  }
}

TEST(LambShift, HermitianAndBounded) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto model = random_model(2, 1, rng, finite_config(0.3 + 0.2 * trial, 2.0 + trial));
    const auto& d = model.jump(0);
    const double aa = op_norm(d.op.adjoint() * d.op);
    EXPECT_LE(d.lamb_defect, 1e-6 * aa);
    EXPECT_LT(hermiticity_defect(lamb_shift_operator(model, 0)), 1e-12);
    EXPECT_LE(op_norm(lamb_shift_operator(model, 0)), 0.5 * aa + 1e-6);
  }
}

TEST(LambShift, IdentityJumpCommutes) {
  std::mt19937_64 rng(7);
  Matrix h = random_hermitian(4, rng);
  LindbladModel model(from_dense(h), {{"I", Matrix::Identity(4, 4)}}, finite_config(1.0, 5.0));
  EXPECT_LT(commutator(lamb_shift_operator(model, 0), h).norm(), 1e-8);
  EXPECT_LT(model.jump(0).gradient.norm(), 1e-8);
}

TEST(LambShift, CommutatorWithHamiltonianShrinksWithTau) {
  std::mt19937_64 rng(8);
  Matrix h = random_hermitian(4, rng);
  h /= op_norm(h);
  Matrix a = random_hermitian_jump(4, rng);
  double prev = 1e9;
  for (double tau : {1e2, 1e3, 1e4}) {
    LindbladModel model(from_dense(h), {{"A", a}}, finite_config(1.0, tau));
    const double c = op_norm(commutator(lamb_shift_operator(model, 0), h));
    EXPECT_LT(c, prev) << tau;
    prev = c;
  }
}

TEST(Evolve, ZeroTimeAndSemigroup) {
  std::mt19937_64 rng(9);
  auto model = random_model(2, 2, rng, finite_config(1.0, 6.0));
  auto rho = DensityMatrix::from_matrix(random_density(4, rng));
  WeightVector w{{0.4, 0.7}};
  EXPECT_EQ((evolve(model, w, rho, 0.0).mat() - rho.mat()).norm(), 0.0);
  auto one = evolve(model, w, rho, 0.6);
  auto two = evolve(model, w, evolve(model, w, rho, 0.3), 0.3);
  EXPECT_LT(trace_norm(one.mat() - two.mat()), 1e-8);
}

TEST(Evolve, QubitRateEquation) {
  auto model = qubit_model(davies_config(10.0));
  const double gm = gamma(-1.0, 10.0, 1.0), gp = gamma(1.0, 10.0, 1.0);
  const double pbar = gp / (gp + gm);
  auto rho0 = DensityMatrix::basis_state(2, 1);
  for (double s : {0.1, 1.0, 5.0, 10.0}) {
    auto rho = evolve(model, WeightVector::unit(1, 0), rho0, s);
    const double want = pbar + (1.0 - pbar) * std::exp(-(gp + gm) * s);
    EXPECT_NEAR(rho.mat()(1, 1).real(), want, 1e-6) << s;
    EXPECT_LT(std::abs(rho.mat()(0, 1)), 1e-12);
  }
}

TEST(Superoperator, MatchesGeneratorApply) {
  std::mt19937_64 rng(21);
  for (auto cfg : {finite_config(1.0, 6.0), davies_config(3.0)}) {
    auto model = random_model(2, 2, rng, cfg);
    WeightVector w{{0.3, 0.9}};
    const Matrix sup = model.superoperator(w);
    const Matrix rho = random_density(4, rng);
    const Matrix direct = model.generator_apply(w, rho);
    const Vector v = sup * Eigen::Map<const Vector>(rho.data(), 16);
    EXPECT_LT((Eigen::Map<const Matrix>(v.data(), 4, 4) - direct).norm(), 1e-12);
  }
}

TEST(Evolve, MatchesMatrixExponential) {
  std::mt19937_64 rng(22);
  auto model = random_model(3, 1, rng, finite_config(2.0, 5.0));
  const auto w = WeightVector::unit(1, 0);
  const Matrix rho = random_density(8, rng);
  for (double s : {0.05, 0.8, 3.0}) {
    const Matrix prop = (s * model.superoperator(w)).exp();
    const Vector v = prop * Eigen::Map<const Vector>(rho.data(), 64);
    const Matrix want = Eigen::Map<const Matrix>(v.data(), 8, 8);
    EXPECT_LT(trace_norm(evolve(model, w, DensityMatrix::from_matrix(rho), s).mat() - hermitian_part(want)), 1e-9) << s;
  }
}

TEST(Evolve, DaviesGroupBlockPathMatchesExponential) {
  // Degenerate spectrum; diagonal and mixed starts use the group-block route,
  // a random state the full superoperator.
  auto model = LindbladModel(build_ising_chain(3, 0.3, true), pauli_x_jumps(3), davies_config(4.0));
  std::mt19937_64 rng(23);
  WeightVector w{{0.2, 0.5, 0.3}};
  const Matrix sup = model.superoperator(w);
  for (const Matrix& rho : {DensityMatrix::basis_state(8, 3).mat(), DensityMatrix::maximally_mixed(8).mat(),
                            random_density(8, rng)}) {
    for (double s : {0.1, 2.0}) {
      const Vector v = (s * sup).exp() * Eigen::Map<const Vector>(rho.data(), 64);
      const Matrix want = Eigen::Map<const Matrix>(v.data(), 8, 8);
      EXPECT_LT(trace_norm(evolve(model, w, DensityMatrix::from_matrix(rho), s).mat() - hermitian_part(want)), 1e-9);
    }
  }
}

TEST(Evolve, MatrixFreePathAboveSuperoperatorLimit) {
  auto model = LindbladModel(build_ising_chain(6, 0.7, false), pauli_x_jumps(6), davies_config(2.0));
  EXPECT_THROW(model.superoperator(WeightVector::uniform(6)), Error);
  const auto w = WeightVector::uniform(6);
  auto rho = DensityMatrix::basis_state(64, 5);
  auto one = evolve(model, w, rho, 0.4);
  auto two = evolve(model, w, evolve(model, w, rho, 0.2), 0.2);
  EXPECT_LT(trace_norm(one.mat() - two.mat()), 1e-8);
  EXPECT_LT(expectation(model.hamiltonian().dense, one), expectation(model.hamiltonian().dense, rho));
}

TEST(Evolve, PositivityPreserved) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    auto model = random_model(trial % 2 == 0 ? 1 : 2, 1, rng, finite_config(0.5 + trial % 5, 2.0 + trial % 4));
    const Eigen::Index dim = model.hamiltonian().dim();
    // Pure start states are the most fragile for positivity.
    auto rho = DensityMatrix::pure(random_vector(dim, rng));
    auto out = evolve(model, WeightVector::unit(1, 0), rho, 0.5 + 0.05 * (trial % 10));
    EXPECT_GE(min_eigenvalue(out.mat()), -1e-6);
  }
}

TEST(Evolve, Errors) {
  auto model = qubit_model(davies_config(1.0));
  auto rho = DensityMatrix::maximally_mixed(2);
  try {
    evolve(model, WeightVector::unit(1, 0), rho, -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeTime);
  }
  EXPECT_THROW(evolve(model, WeightVector::unit(1, 0), rho, 11.0), Error);
  EXPECT_THROW(evolve(model, WeightVector{{-0.1}}, rho, 1.0), Error);
}

TEST(Model, JumpValidation) {
  Matrix h = pauli_letter('Z');
  Matrix big = 2.0 * pauli_letter('X');
  EXPECT_THROW(LindbladModel(from_dense(h), {{"big", big}}, davies_config(1.0)), Error);
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  EXPECT_THROW(LindbladModel(from_dense(h), {{"low", lower}}, davies_config(1.0)), Error);
  EXPECT_NO_THROW(LindbladModel(from_dense(h), {{"low", lower}, {"up", Matrix(lower.adjoint())}}, davies_config(1.0)));
  auto model = qubit_model(davies_config(1.0));
  try {
    model.jump_index("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownJump);
  }
}

TEST(Model, EnergyGradientNormBound) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto model = random_model(trial % 3 == 0 ? 3 : 2, 1, rng, finite_config(1.0 + trial, 4.0));
    EXPECT_LE(op_norm(model.jump(0).gradient), 3.0 * op_norm(model.hamiltonian().dense) + 1e-6);
  }
}

TEST(Model, DaviesRecoveryTrend) {
  // Finite-tau dissipator approaches the Davies one on random Hermitian probes.
  std::mt19937_64 rng(12);
  Matrix h = random_hermitian(4, rng);
  h /= op_norm(h);
  Matrix a = random_hermitian_jump(4, rng);
  LindbladModel davies(from_dense(h), {{"A", a}}, davies_config(2.0));
  std::vector<Matrix> probes;
  for (int k = 0; k < 5; ++k) {
    Matrix p = random_hermitian(4, rng);
    probes.push_back(p / op_norm(p));
  }
  double prev = 1e9;
  for (double tau : {1e2, 1e3, 1e4}) {
    LindbladModel finite(from_dense(h), {{"A", a}}, finite_config(2.0, tau));
    double worst = 0.0;
    for (const auto& p : probes) {
      worst = std::max(worst, op_norm(finite.dissipative_adjoint(0, p) - davies.dissipative_adjoint(0, p)));
    }
    EXPECT_LT(worst, prev) << tau;
    prev = worst;
  }
}

TEST(Model, SecularTruncationApproachesFullKernel) {
  std::mt19937_64 rng(13);
  Matrix h = random_hermitian(4, rng);
  Matrix a = random_hermitian_jump(4, rng);
  auto cfg = finite_config(1.0, 20.0);
  LindbladModel full(from_dense(h), {{"A", a}}, cfg);
  cfg.secular_mu = 50.0;
  LindbladModel secular(from_dense(h), {{"A", a}}, cfg);
  EXPECT_LT((full.jump(0).m - secular.jump(0).m).norm(), 1e-8);
}
