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
 * Local Hamiltonians, their grouped spectra, and the decomposition of jump
 * operators into Bohr-frequency blocks A_nu = sum_{E2-E1=nu} P_E2 A P_E1.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "thermoscape/operator_core.hpp"

namespace thermoscape {

/// Hermitian operator acting on an ordered list of sites.
struct LocalTerm {
  Matrix op;
  std::vector<int> sites;
};

struct LocalHamiltonian {
  int n = 0;
  std::vector<LocalTerm> terms;
  Matrix dense;
  /// Sum of the terms' operator norms; an upper bound on ||dense||.
  double norm_bound_B = 0.0;

  Eigen::Index dim() const { return dense.rows(); }
};

inline LocalHamiltonian assemble(std::vector<LocalTerm> terms, int n) {
  const std::int64_t dim = qubit_dim(n);
  LocalHamiltonian h;
  h.n = n;
  h.dense = Matrix::Zero(dim, dim);
  for (const auto& term : terms) {
    require_hermitian(term.op, "Hamiltonian term");
    h.dense += kron_embed(term.op, term.sites, n);
    h.norm_bound_B += op_norm(term.op);
  }
  h.dense = hermitian_part(h.dense);
  h.terms = std::move(terms);
  return h;
}

/// A Hamiltonian given only as a dense matrix (one term on all qubits).
inline LocalHamiltonian from_dense(const Matrix& dense) {
  check_square(dense, "Hamiltonian");
  int n = 0;
  while ((Eigen::Index{1} << n) < dense.rows()) ++n;
  if ((Eigen::Index{1} << n) != dense.rows()) {
    fail(ErrorKind::DimensionMismatch, "dimension " + std::to_string(dense.rows()) +
                                           " is not a power of two");
  }
  std::vector<int> sites(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) sites[static_cast<std::size_t>(q)] = q;
  return assemble({LocalTerm{dense, sites}}, n);
}

/// Ferromagnetic chain H = -J sum Z_j Z_{j+1} - h sum Z_j.
inline LocalHamiltonian build_ising_chain(int n, double h, bool periodic, double j_scale = 1.0) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "Ising chain needs n >= 2");
  check_qubit_count(n);
  const Matrix zz = -j_scale * pauli_matrix({1.0, "ZZ"}, 2);
  const Matrix z = -h * pauli_letter('Z');
  std::vector<LocalTerm> terms;
  const int bonds = periodic ? n : n - 1;
  for (int j = 0; j < bonds; ++j) terms.push_back({zz, {j, (j + 1) % n}});
  if (h != 0.0) {
    for (int j = 0; j < n; ++j) terms.push_back({z, {j}});
  }
  return assemble(std::move(terms), n);
}

// ---------------------------------------------------------------------------

/// Eigenvalues grouped into degenerate levels, with projectors and Bohr data.
struct SpectralData {
  EigenDecomposition eig;
  std::vector<double> energies;            ///< group means, ascending
  std::vector<Eigen::Index> group_start;   ///< first eigen index of each group
  std::vector<Eigen::Index> group_size;
  std::vector<Matrix> projectors;
  std::vector<double> bohr_freqs;          ///< ascending, symmetric under negation
  double spectral_gap = std::numeric_limits<double>::infinity();
  double bohr_gap = std::numeric_limits<double>::infinity();
  double group_tol = 0.0;

  std::size_t num_groups() const { return energies.size(); }
  Eigen::Index dim() const { return eig.vectors.rows(); }

  /// Index of the Bohr frequency closest to nu, if within group_tol.
  std::optional<std::size_t> bohr_index(double nu) const {
    auto it = std::lower_bound(bohr_freqs.begin(), bohr_freqs.end(), nu);
    std::optional<std::size_t> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (auto cand : {it, it == bohr_freqs.begin() ? it : std::prev(it)}) {
      if (cand == bohr_freqs.end()) continue;
      const double d = std::abs(*cand - nu);
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<std::size_t>(cand - bohr_freqs.begin());
      }
    }
    if (best && best_dist <= 2.0 * group_tol) return best;
    return std::nullopt;
  }

  std::size_t group_of_freq_pair_index(std::size_t gi, std::size_t gj) const {
    auto idx = bohr_index(energies[gi] - energies[gj]);
    if (!idx) fail(ErrorKind::GroupingUnstable, "energy difference not in Bohr set");
    return *idx;
  }
};

inline double default_group_tol(const Matrix& h) {
  return std::max(1e-8 * op_norm(h), 1e-12);
}

inline SpectralData spectral_data(const Matrix& h, std::optional<double> group_tol = std::nullopt) {
  const double tol = group_tol.value_or(default_group_tol(h));
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "group_tol must be positive");
  SpectralData sd;
  sd.group_tol = tol;
  sd.eig = herm_eig(h);
  const auto& lam = sd.eig.values;
  const Eigen::Index dim = lam.size();

  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= dim; ++i) {
    if (i == dim || lam(i) - lam(i - 1) > tol) {
      sd.group_start.push_back(start);
      sd.group_size.push_back(i - start);
      sd.energies.push_back(lam.segment(start, i - start).mean());
      start = i;
    }
  }
  for (std::size_t g = 1; g < sd.energies.size(); ++g) {
    if (sd.energies[g] - sd.energies[g - 1] <= 3.0 * tol) {
      fail(ErrorKind::GroupingUnstable, "eigenvalue groups at " + std::to_string(sd.energies[g - 1]) +
                                            " and " + std::to_string(sd.energies[g]) +
                                            " are within 3*group_tol");
    }
  }
  for (std::size_t g = 0; g < sd.energies.size(); ++g) {
    const auto& v = sd.eig.vectors.middleCols(sd.group_start[g], sd.group_size[g]);
    sd.projectors.push_back(v * v.adjoint());
  }
  for (std::size_t g = 1; g < sd.energies.size(); ++g) {
    sd.spectral_gap = std::min(sd.spectral_gap, sd.energies[g] - sd.energies[g - 1]);
  }

  std::vector<double> diffs;
  for (double ei : sd.energies) {
    for (double ej : sd.energies) diffs.push_back(ei - ej);
  }
  std::sort(diffs.begin(), diffs.end());
  std::vector<double> clustered;
  std::size_t cs = 0;
  for (std::size_t i = 1; i <= diffs.size(); ++i) {
    if (i == diffs.size() || diffs[i] - diffs[i - 1] > tol) {
      double sum = 0.0;
      for (std::size_t k = cs; k < i; ++k) sum += diffs[k];
      clustered.push_back(sum / static_cast<double>(i - cs));
      cs = i;
    }
  }
  // The difference set is symmetric; enforce exact negation symmetry.
  const std::size_t nf = clustered.size();
  sd.bohr_freqs.resize(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    sd.bohr_freqs[k] = 0.5 * (clustered[k] - clustered[nf - 1 - k]);
  }
  for (std::size_t k = 1; k < nf; ++k) {
    sd.bohr_gap = std::min(sd.bohr_gap, sd.bohr_freqs[k] - sd.bohr_freqs[k - 1]);
  }
  return sd;
}

inline SpectralData spectral_data(const LocalHamiltonian& h,
                                  std::optional<double> group_tol = std::nullopt) {
  return spectral_data(h.dense, group_tol);
}

// ---------------------------------------------------------------------------

/// Bohr-frequency components of one jump operator.
struct BohrBlocks {
  std::vector<double> nus;             ///< ascending
  std::vector<std::size_t> freq_index;  ///< index into SpectralData::bohr_freqs
  std::vector<Matrix> blocks;

  std::size_t size() const { return nus.size(); }

  /// Block at the given Bohr-frequency index, or nullptr if absent.
  const Matrix* find(std::size_t bohr_idx) const {
    for (std::size_t k = 0; k < freq_index.size(); ++k) {
      if (freq_index[k] == bohr_idx) return &blocks[k];
    }
    return nullptr;
  }
};

/// Splits A into sum_nu A_nu; blocks with ||A_nu||_F <= 1e-12 ||A||_F are dropped.
inline BohrBlocks bohr_decompose(const Matrix& a, const SpectralData& sd) {
  check_square(a, "jump operator");
  if (a.rows() != sd.dim()) fail(ErrorKind::DimensionMismatch, "jump and Hamiltonian dimensions differ");
  const Matrix& v = sd.eig.vectors;
  const Matrix a_eig = v.adjoint() * a * v;
  const std::size_t nf = sd.bohr_freqs.size();
  std::vector<Matrix> acc(nf);
  std::vector<bool> present(nf, false);
  for (std::size_t gi = 0; gi < sd.num_groups(); ++gi) {
    for (std::size_t gj = 0; gj < sd.num_groups(); ++gj) {
      const auto blk = a_eig.block(sd.group_start[gi], sd.group_start[gj], sd.group_size[gi],
                                   sd.group_size[gj]);
      if (blk.norm() == 0.0) continue;
      const std::size_t f = sd.group_of_freq_pair_index(gi, gj);
      if (!present[f]) {
        acc[f] = Matrix::Zero(a.rows(), a.cols());
        present[f] = true;
      }
      acc[f].block(sd.group_start[gi], sd.group_start[gj], sd.group_size[gi], sd.group_size[gj]) = blk;
    }
  }
  BohrBlocks out;
  const double cutoff = 1e-12 * a.norm();
  for (std::size_t f = 0; f < nf; ++f) {
    if (!present[f]) continue;
    Matrix block = v * acc[f] * v.adjoint();
    if (block.norm() <= cutoff) continue;
    out.nus.push_back(sd.bohr_freqs[f]);
    out.freq_index.push_back(f);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

}  // namespace thermoscape
