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
 * Energy gradients g_a = Tr(H L_a[rho]) = Tr(L_a^dag[H] rho), local-minimum
 * certificates, and the operator inequality that rules out suboptimal minima.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "thermoscape/lindblad.hpp"

namespace thermoscape {

/// L_a^dag[H] = i[H_LS,a, H] + D_a^dag[H]; cached at model construction.
inline const Matrix& gradient_operator(const LindbladModel& model, std::size_t a) {
  return model.jump(a).gradient;
}

struct GradientReport {
  std::vector<std::size_t> jumps;
  std::vector<std::string> labels;
  std::vector<double> g;
  std::vector<double> grad_plus;
  std::vector<double> grad_minus;
  double inf_norm_minus = 0.0;
  double l1_norm_minus = 0.0;
  double inf_norm = 0.0;
  double l1_norm = 0.0;

  /// Entry of grad_minus attaining inf_norm_minus (first on ties).
  std::optional<std::size_t> argmax_minus() const {
    if (g.empty() || inf_norm_minus == 0.0) return std::nullopt;
    return static_cast<std::size_t>(std::max_element(grad_minus.begin(), grad_minus.end()) - grad_minus.begin());
  }
};

inline std::vector<std::size_t> all_jumps(const LindbladModel& model) {
  std::vector<std::size_t> out(model.num_jumps());
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = a;
  return out;
}

inline GradientReport gradient_vector(const LindbladModel& model, const std::vector<std::size_t>& support,
                                      const DensityMatrix& rho) {
  GradientReport r;
  for (std::size_t a : support) {
    const double g = expectation(gradient_operator(model, a), rho);
    r.jumps.push_back(a);
    r.labels.push_back(model.jump(a).label);
    r.g.push_back(g);
    r.grad_plus.push_back(std::max(g, 0.0));
    r.grad_minus.push_back(std::max(-g, 0.0));
    r.inf_norm_minus = std::max(r.inf_norm_minus, r.grad_minus.back());
    r.l1_norm_minus += r.grad_minus.back();
    r.inf_norm = std::max(r.inf_norm, std::abs(g));
    r.l1_norm += std::abs(g);
  }
  return r;
}

inline GradientReport gradient_vector(const LindbladModel& model, const DensityMatrix& rho) {
  return gradient_vector(model, all_jumps(model), rho);
}

enum class CertificateKind { LocalMinSufficient, NotLocalMinNecessaryViolated, Inconclusive };

inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::LocalMinSufficient: return "local_min_sufficient";
    case CertificateKind::NotLocalMinNecessaryViolated: return "not_local_min_necessary_violated";
    case CertificateKind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct CertificateResult {
  CertificateKind kind = CertificateKind::Inconclusive;
  double epsilon = 0.0;
  double inf_norm_minus = 0.0;
  std::optional<std::string> witness;
};

inline constexpr double kCertificateTieTol = 1e-12;

inline CertificateResult certify(const GradientReport& report, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be > 0");
  CertificateResult c;
  c.epsilon = epsilon;
  c.inf_norm_minus = report.inf_norm_minus;
  if (std::abs(report.inf_norm_minus - epsilon) <= kCertificateTieTol) {
    c.kind = CertificateKind::Inconclusive;
  } else if (report.inf_norm_minus < epsilon) {
    c.kind = CertificateKind::LocalMinSufficient;
  } else {
    c.kind = CertificateKind::NotLocalMinNecessaryViolated;
    c.witness = report.labels[*report.argmax_minus()];
  }
  return c;
}

inline CertificateResult certify_local_min(const LindbladModel& model, const DensityMatrix& rho, double epsilon) {
  return certify(gradient_vector(model, rho), epsilon);
}

struct NgcResult {
  bool holds = false;
  double min_eigenvalue_slack = 0.0;
  Vector witness;  ///< eigenvector of the smallest eigenvalue of M
};

/// M = -sum_a alpha_a L_a^dag[H] - r (I - P_G) + epsilon I; holds iff lambda_min(M) >= -1e-9.
inline NgcResult negative_gradient_condition(const LindbladModel& model, const WeightVector& alpha_hat,
                                             const Matrix& ground_projector, double r, double epsilon) {
  alpha_hat.validate(model.num_jumps());
  if (std::abs(alpha_hat.l1() - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "alpha_hat must have unit 1-norm");
  if (!(r >= 0.0) || !(epsilon >= 0.0)) fail(ErrorKind::InvalidArgument, "r and epsilon must be >= 0");
  check_same_dim(ground_projector, model.hamiltonian().dense, "ground projector");
  if ((ground_projector * ground_projector - ground_projector).norm() > 1e-9) {
    fail(ErrorKind::InvalidArgument, "ground projector is not idempotent");
  }
  const Eigen::Index dim = ground_projector.rows();
  Matrix m = epsilon * identity(dim) - r * (identity(dim) - ground_projector);
  for (std::size_t a = 0; a < model.num_jumps(); ++a) {
    if (alpha_hat.alphas[a] != 0.0) m -= alpha_hat.alphas[a] * gradient_operator(model, a);
  }
  auto e = herm_eig(hermitian_part(m));
  NgcResult out;
  out.min_eigenvalue_slack = e.values(0);
  out.holds = out.min_eigenvalue_slack >= -1e-9;
  out.witness = e.vectors.col(0);
  return out;
}

struct NgcParameters {
  double r = 0.0;
  double epsilon = 0.0;
};

/// (epsilon, delta) -> r = 2 epsilon / delta with shift epsilon.
inline NgcParameters ngc_parameters(double epsilon, double delta) {
  if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "delta must be > 0");
  return {2.0 * epsilon / delta, epsilon};
}

/// Terms of a commuting Hamiltonian that do not commute with the jump.
inline LocalHamiltonian localize_commuting(const LocalHamiltonian& h, const Matrix& jump) {
  check_same_dim(jump, h.dense, "jump operator");
  std::vector<Matrix> embedded;
  for (const auto& t : h.terms) embedded.push_back(kron_embed(t.op, t.sites, h.n));
  for (std::size_t i = 0; i < embedded.size(); ++i) {
    for (std::size_t j = i + 1; j < embedded.size(); ++j) {
      if (commutator(embedded[i], embedded[j]).norm() > 1e-10) {
        fail(ErrorKind::NotCommutingHamiltonian, "terms " + std::to_string(i) + " and " + std::to_string(j) +
                                                     " do not commute");
      }
    }
  }
  std::vector<LocalTerm> kept;
  for (std::size_t i = 0; i < embedded.size(); ++i) {
    if (commutator(embedded[i], jump).norm() > 1e-10) kept.push_back(h.terms[i]);
  }
  return assemble(std::move(kept), h.n);
}

inline LocalHamiltonian localize_commuting(const LindbladModel& model, std::size_t a) {
  return localize_commuting(model.hamiltonian(), model.jump(a).op);
}

}  // namespace thermoscape
