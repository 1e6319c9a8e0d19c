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
 * Energy landscape under local unitary perturbations exp(-i s h_a) of pure
 * states: first-order gradients, Haar-sample statistics, and the Tr(O)/2^k
 * predictor.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "thermoscape/operator_core.hpp"

namespace thermoscape {

struct UnitaryGenerator {
  std::string label;
  Matrix op;
  std::vector<int> sites;
};

struct UnitaryPerturbationSet {
  int n = 0;
  std::vector<UnitaryGenerator> generators;

  /// Each generator Hermitian with unit operator norm (1e-10).
  void validate() const {
    check_qubit_count(n);
    for (const auto& g : generators) {
      require_hermitian(g.op, "generator");
      if (g.op.rows() != (Eigen::Index{1} << g.sites.size())) {
        fail(ErrorKind::DimensionMismatch, "generator '" + g.label + "' does not match its sites");
      }
      if (std::abs(op_norm(g.op) - 1.0) > 1e-10) {
        fail(ErrorKind::InvalidArgument, "generator '" + g.label + "' must have unit operator norm");
      }
    }
  }
};

/// {X_j, Y_j, Z_j} on every qubit, labelled "X0", "Y0", ...
inline UnitaryPerturbationSet single_site_pauli_generators(int n) {
  UnitaryPerturbationSet set;
  set.n = n;
  for (int j = 0; j < n; ++j) {
    for (char p : {'X', 'Y', 'Z'}) set.generators.push_back({std::string(1, p) + std::to_string(j), pauli_letter(p), {j}});
  }
  return set;
}

/// (op on sites) applied to a full-register vector without forming the embedding.
inline Vector apply_local(const Matrix& op, const std::vector<int>& sites, int n, const Vector& v) {
  const int k = static_cast<int>(sites.size());
  const std::int64_t dim = qubit_dim(n);
  if (v.size() != dim) fail(ErrorKind::DimensionMismatch, "state dimension does not match qubit count");
  if (op.rows() != (std::int64_t{1} << k)) fail(ErrorKind::DimensionMismatch, "operator does not match its sites");
  std::int64_t mask = 0;
  std::vector<std::int64_t> offset(static_cast<std::size_t>(op.rows()), 0);
  for (int q = 0; q < k; ++q) {
    if (sites[static_cast<std::size_t>(q)] < 0 || sites[static_cast<std::size_t>(q)] >= n) {
      fail(ErrorKind::SiteOutOfRange, "site " + std::to_string(sites[static_cast<std::size_t>(q)]));
    }
    mask |= std::int64_t{1} << (n - 1 - sites[static_cast<std::size_t>(q)]);
  }
  for (std::int64_t l = 0; l < op.rows(); ++l) {
    for (int q = 0; q < k; ++q) {
      if ((l >> (k - 1 - q)) & 1) offset[static_cast<std::size_t>(l)] |= std::int64_t{1} << (n - 1 - sites[static_cast<std::size_t>(q)]);
    }
  }
  Vector out = Vector::Zero(dim);
  Vector local(op.rows());
  for (std::int64_t rest = 0; rest < dim; ++rest) {
    if (rest & mask) continue;
    for (std::int64_t l = 0; l < op.rows(); ++l) local(l) = v(rest | offset[static_cast<std::size_t>(l)]);
    const Vector r = op * local;
    for (std::int64_t l = 0; l < op.rows(); ++l) out(rest | offset[static_cast<std::size_t>(l)]) = r(l);
  }
  return out;
}

/// Normalized complex Gaussian vector, i.e. a Haar-random pure state.
inline Vector random_pure_state(int n, std::uint64_t seed) {
  check_qubit_count(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(qubit_dim(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

/// Entry a = -i <psi|[H, h_a]|psi>.
inline std::vector<double> unitary_gradient(const Vector& psi, const Matrix& h, const UnitaryPerturbationSet& gens) {
  check_square(h, "Hamiltonian");
  if (psi.size() != h.rows() || h.rows() != qubit_dim(gens.n)) {
    fail(ErrorKind::DimensionMismatch, "state, Hamiltonian and generator register differ");
  }
  const Vector hpsi = h * psi;
  std::vector<double> out;
  out.reserve(gens.generators.size());
  for (const auto& g : gens.generators) {
    const Vector gpsi = apply_local(g.op, g.sites, gens.n, psi);
    // <psi|H h|psi> - <psi|h H|psi>
    const Complex comm = hpsi.dot(gpsi) - gpsi.dot(hpsi);
    const Complex entry = Complex(0.0, -1.0) * comm;
    if (std::abs(entry.imag()) > 1e-10 * std::max(1.0, std::abs(entry.real()))) {
      fail(ErrorKind::NonRealExpectation, "gradient entry for '" + g.label + "' is not real");
    }
    out.push_back(entry.real());
  }
  return out;
}

/// Tr(O) / 2^k for an observable on k qubits.
inline double trivial_predictor(const Matrix& o, int k) {
  check_square(o, "observable");
  if (o.rows() != qubit_dim(k)) fail(ErrorKind::DimensionMismatch, "observable does not act on k qubits");
  require_hermitian(o, "observable");
  return o.trace().real() / static_cast<double>(o.rows());
}

struct PlateauSample {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  double max_abs_gradient = 0.0;
  double obs_deviation = 0.0;  ///< |<psi|O|psi> - Tr(O)/2^n|
};

struct PlateauSummary {
  int n = 0;
  double reference = 0.0;  ///< Tr(O)/2^n
  std::vector<PlateauSample> samples;
  double mean_max_gradient = 0.0;
  double max_max_gradient = 0.0;
  double median_max_gradient = 0.0;
  double mean_obs_deviation = 0.0;
  double max_obs_deviation = 0.0;

  /// Fraction of samples with both max gradient and deviation <= threshold.
  double fraction_within(double threshold) const {
    if (samples.empty()) return 0.0;
    std::int64_t ok = 0;
    for (const auto& s : samples) ok += (s.max_abs_gradient <= threshold && s.obs_deviation <= threshold) ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(samples.size());
  }
};

/// Sample i uses seed + i.
inline PlateauSummary plateau_stats(int n, const Matrix& h, const Matrix& obs, const UnitaryPerturbationSet& gens,
                                    std::int64_t num_samples, std::uint64_t seed) {
  if (num_samples < 1) fail(ErrorKind::InvalidArgument, "num_samples must be >= 1");
  if (gens.n != n) fail(ErrorKind::DimensionMismatch, "generator register differs from n");
  gens.validate();
  require_hermitian(h, "Hamiltonian");
  PlateauSummary s;
  s.n = n;
  s.reference = trivial_predictor(obs, n);
  std::vector<double> maxima;
  for (std::int64_t i = 0; i < num_samples; ++i) {
    const std::uint64_t sd = seed + static_cast<std::uint64_t>(i);
    const Vector psi = random_pure_state(n, sd);
    const auto g = unitary_gradient(psi, h, gens);
    PlateauSample row;
    row.index = i;
    row.seed = sd;
    for (double x : g) row.max_abs_gradient = std::max(row.max_abs_gradient, std::abs(x));
    row.obs_deviation = std::abs(psi.dot(obs * psi).real() - s.reference);
    s.samples.push_back(row);
    maxima.push_back(row.max_abs_gradient);
    s.mean_max_gradient += row.max_abs_gradient;
    s.max_max_gradient = std::max(s.max_max_gradient, row.max_abs_gradient);
    s.mean_obs_deviation += row.obs_deviation;
    s.max_obs_deviation = std::max(s.max_obs_deviation, row.obs_deviation);
  }
  const auto m = static_cast<double>(num_samples);
  s.mean_max_gradient /= m;
  s.mean_obs_deviation /= m;
  std::sort(maxima.begin(), maxima.end());
  const std::size_t mid = maxima.size() / 2;
  s.median_max_gradient = maxima.size() % 2 ? maxima[mid] : 0.5 * (maxima[mid - 1] + maxima[mid]);
  return s;
}

/// (1/n)(sum_j Z_j Z_{j+1} + sum_j X_j) on an open chain; ||H|| <= 2.
inline Matrix normalized_transverse_ising(int n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "chain needs n >= 2");
  Matrix h = Matrix::Zero(qubit_dim(n), qubit_dim(n));
  for (int j = 0; j + 1 < n; ++j) h += kron_embed(pauli_matrix({1.0, "ZZ"}, 2), {j, j + 1}, n);
  for (int j = 0; j < n; ++j) h += kron_embed(pauli_letter('X'), {j}, n);
  return h / static_cast<double>(n);
}

}  // namespace thermoscape
