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
 * Thermal Lindbladians assembled from Bohr blocks.
 *
 * With A_nu the Bohr components of a jump and C the overlap kernel, the
 * dissipator and its adjoint are
 *   D[rho]  = sum_{nu'} B_{nu'} rho A_{nu'}^dag - 1/2 {M, rho}
 *   D^dag[O] = sum_{nu'} A_{nu'}^dag O B_{nu'} - 1/2 {M, O}
 * where B_{nu'} = sum_nu C(nu', nu) A_nu and M = sum_{nu'} A_{nu'}^dag B_{nu'}.
 * The Davies limit is the special case C(nu', nu) = gamma(nu) delta.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "thermoscape/bath.hpp"
#include "thermoscape/hamiltonian.hpp"

namespace thermoscape {

struct LabeledJump {
  std::string label;
  Matrix op;
};

struct LindbladConfig {
  BathSpec bath;
  /// Exact-Bohr-frequency generator (tau = infinity); bath.tau is ignored.
  bool davies = false;
  /// beta = infinity weight; only meaningful with davies.
  bool zero_temperature = false;
  double beta_cap = kDefaultBetaCap;
  bool include_lamb_shift = true;
  bool include_coherent = false;
  /// Restrict the frequency overlap to |w - nu| < mu (finite tau only).
  std::optional<double> secular_mu;
  std::optional<double> group_tol;
};

/// Nonnegative jump weights.
struct WeightVector {
  std::vector<double> alphas;

  static WeightVector unit(std::size_t m, std::size_t a) {
    WeightVector w{std::vector<double>(m, 0.0)};
    w.alphas.at(a) = 1.0;
    return w;
  }
  static WeightVector uniform(std::size_t m) {
    return WeightVector{std::vector<double>(m, 1.0 / static_cast<double>(m))};
  }
  double l1() const {
    double s = 0.0;
    for (double a : alphas) s += a;
    return s;
  }
  void validate(std::size_t m) const {
    if (alphas.size() != m) fail(ErrorKind::DimensionMismatch, "weight vector length differs from jump count");
    for (double a : alphas) {
      if (!std::isfinite(a) || a < 0.0) fail(ErrorKind::InvalidArgument, "weights must be finite and >= 0");
    }
  }
};

class LindbladModel {
 public:
  struct JumpData {
    std::string label;
    Matrix op;
    BohrBlocks blocks;
    std::vector<Matrix> b;  ///< B_{nu'} aligned with blocks
    Matrix m;               ///< sum A^dag B
    Matrix lamb;            ///< Hermitized Lamb shift (zero if disabled)
    double lamb_defect = 0.0;
    Matrix gradient;        ///< i[H_LS, H] + D^dag[H]
    double m_norm = 0.0;
    double lamb_norm = 0.0;
  };

  LindbladModel(LocalHamiltonian h, std::vector<LabeledJump> jumps, LindbladConfig cfg)
      : h_(std::move(h)), cfg_(std::move(cfg)) {
    validate_config();
    sd_ = spectral_data(h_.dense, cfg_.group_tol);
    check_jumps(jumps);
    for (auto& j : jumps) {
      JumpData d;
      d.label = std::move(j.label);
      d.op = std::move(j.op);
      d.blocks = bohr_decompose(d.op, sd_);
      jumps_.push_back(std::move(d));
    }
    if (!cfg_.davies) build_kernels();
    for (auto& d : jumps_) assemble_jump(d);
    h_norm_ = op_norm(h_.dense);
  }

  const LocalHamiltonian& hamiltonian() const { return h_; }
  const SpectralData& spectral() const { return sd_; }
  const LindbladConfig& config() const { return cfg_; }
  const KernelTable* kernels() const { return kernels_ ? &*kernels_ : nullptr; }
  std::size_t num_jumps() const { return jumps_.size(); }
  const JumpData& jump(std::size_t a) const {
    if (a >= jumps_.size()) fail(ErrorKind::UnknownJump, "jump index " + std::to_string(a));
    return jumps_[a];
  }
  std::size_t jump_index(const std::string& label) const {
    for (std::size_t a = 0; a < jumps_.size(); ++a) {
      if (jumps_[a].label == label) return a;
    }
    fail(ErrorKind::UnknownJump, "no jump labelled '" + label + "'");
  }
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& d : jumps_) out.push_back(d.label);
    return out;
  }

  /// Transition weight used at exact Bohr frequencies in the Davies limit.
  double davies_weight(double nu) const {
    if (cfg_.zero_temperature) return gamma_zero_temperature(nu, cfg_.bath.lambda0, cfg_.beta_cap);
    return gamma(nu, cfg_.bath);
  }

  Matrix dissipative_adjoint(std::size_t a, const Matrix& obs) const {
    const auto& d = jump(a);
    check_same_dim(obs, h_.dense, "observable");
    Matrix out = -0.5 * (d.m * obs + obs * d.m);
    for (std::size_t k = 0; k < d.blocks.size(); ++k) out += d.blocks.blocks[k].adjoint() * obs * d.b[k];
    return out;
  }

  Matrix dissipative_apply(std::size_t a, const Matrix& rho) const {
    const auto& d = jump(a);
    check_same_dim(rho, h_.dense, "state");
    Matrix out = -0.5 * (d.m * rho + rho * d.m);
    for (std::size_t k = 0; k < d.blocks.size(); ++k) out += d.b[k] * rho * d.blocks.blocks[k].adjoint();
    return out;
  }

  const Matrix& lamb_shift_operator(std::size_t a) const { return jump(a).lamb; }

  /// -i[H_coh, rho] + sum_a alpha_a D_a[rho], H_coh = [H] + sum_a alpha_a H_LS,a.
  Matrix generator_apply(const WeightVector& w, const Matrix& rho, bool include_coherent) const {
    w.validate(jumps_.size());
    check_same_dim(rho, h_.dense, "state");
    Matrix coh = coherent_part(w, include_coherent);
    Matrix out = Complex(0.0, -1.0) * commutator(coh, rho);
    for (std::size_t a = 0; a < jumps_.size(); ++a) {
      if (w.alphas[a] != 0.0) out += w.alphas[a] * dissipative_apply(a, rho);
    }
    return out;
  }

  Matrix generator_apply(const WeightVector& w, const Matrix& rho) const {
    return generator_apply(w, rho, cfg_.include_coherent);
  }

  /// Heisenberg-picture generator: i[H_coh, O] + sum_a alpha_a D_a^dag[O].
  Matrix adjoint_apply(const WeightVector& w, const Matrix& obs) const {
    w.validate(jumps_.size());
    Matrix out = Complex(0.0, 1.0) * commutator(coherent_part(w, cfg_.include_coherent), obs);
    for (std::size_t a = 0; a < jumps_.size(); ++a) {
      if (w.alphas[a] != 0.0) out += w.alphas[a] * dissipative_adjoint(a, obs);
    }
    return out;
  }

  /// rho(s) = exp(s sum_a alpha_a L_a)[rho] by substepped truncated Taylor series.
  DensityMatrix evolve(const WeightVector& w, const DensityMatrix& rho, double s) const {
    w.validate(jumps_.size());
    if (s < 0.0 || !std::isfinite(s)) fail(ErrorKind::NegativeTime, "evolution time must be finite and >= 0");
    if (s * w.l1() > 10.0) fail(ErrorKind::InvalidArgument, "s * |alpha|_1 exceeds 10");
    if (s == 0.0) return rho;
    double bound = cfg_.include_coherent ? 2.0 * h_norm_ : 0.0;
    for (std::size_t a = 0; a < jumps_.size(); ++a) {
      bound += w.alphas[a] * (2.0 * jumps_[a].m_norm + 2.0 * jumps_[a].lamb_norm);
    }
    const int substeps = std::max(1, static_cast<int>(std::ceil(s * bound)));
    const double dt = s / substeps;
    const Eigen::Index dim = h_.dense.rows();
    Matrix x = rho.mat();
    if (cfg_.davies && !cfg_.include_coherent) {
      const Matrix& u = sd_.eig.vectors;
      const Matrix x_eig = u.adjoint() * x * u;
      Vector v = to_group_blocks(x_eig);
      if ((x_eig - from_group_blocks(v)).norm() <= 1e-12) {
        Matrix gen = Matrix::Zero(v.size(), v.size());
        for (std::size_t a = 0; a < jumps_.size(); ++a) {
          if (w.alphas[a] != 0.0) gen += w.alphas[a] * block_generator(a);
        }
        taylor_steps(gen, v, substeps, dt);
        return finalize_state(hermitian_part(u * from_group_blocks(v) * u.adjoint()));
      }
    }
    if (dim <= kSuperoperatorMaxDim) {
      const Matrix sup = superoperator(w);
      Vector v = Eigen::Map<const Vector>(x.data(), dim * dim);
      taylor_steps(sup, v, substeps, dt);
      x = hermitian_part(Eigen::Map<const Matrix>(v.data(), dim, dim));
      return finalize_state(x);
    }
    for (int step = 0; step < substeps; ++step) {
      Matrix term = x;
      Matrix acc = x;
      for (int k = 1; k <= 60; ++k) {
        term = (dt / k) * generator_apply(w, term);
        acc += term;
        if (term.norm() < 1e-15) break;
      }
      x = hermitian_part(acc);
    }
    return finalize_state(x);
  }

  /// Column-stacked matrix of rho -> generator_apply(w, rho); dim <= kSuperoperatorMaxDim.
  Matrix superoperator(const WeightVector& w) const {
    w.validate(jumps_.size());
    const Eigen::Index dim = h_.dense.rows();
    if (dim > kSuperoperatorMaxDim) fail(ErrorKind::SizeLimit, "superoperator limited to dimension 32");
    const Matrix coh = coherent_part(w, cfg_.include_coherent);
    Matrix out = Matrix::Zero(dim * dim, dim * dim);
    if (!coh.isZero(0.0)) {
      const Matrix id = identity(dim);
      out = Complex(0.0, -1.0) * (kron(id, coh) - kron(coh.transpose(), id));
    }
    for (std::size_t a = 0; a < jumps_.size(); ++a) {
      if (w.alphas[a] != 0.0) out += w.alphas[a] * jump_superoperator(a);
    }
    return out;
  }

  /// Hermitize, renormalize, and clip tiny negative eigenvalues.
  static DensityMatrix finalize_state(const Matrix& raw) {
    const double herm = hermiticity_defect(raw);
    const double trace_defect = std::abs(raw.trace().real() - 1.0);
    if (herm > 1e-7 || trace_defect > 1e-7) {
      fail(ErrorKind::InvalidState, "evolved state defect (hermiticity " + std::to_string(herm) + ", trace " +
                                        std::to_string(trace_defect) + ") exceeds 1e-7");
    }
    Matrix x = hermitian_part(raw);
    x /= x.trace().real();
    const double lam = min_eigenvalue(x);
    if (lam < -1e-6) fail(ErrorKind::PositivityDefect, "minimum eigenvalue " + std::to_string(lam));
    if (lam < -1e-9) {
      auto e = herm_eig(x);
      RealVector clipped = e.values.cwiseMax(0.0);
      x = e.vectors * clipped.cast<Complex>().asDiagonal() * e.vectors.adjoint();
      x = hermitian_part(x) / x.trace().real();
    }
    // Hermitian, unit trace and PSD hold by construction here.
    return DensityMatrix::assume_valid(std::move(x));
  }

 private:
  static constexpr Eigen::Index kSuperoperatorMaxDim = 32;

  static void taylor_steps(const Matrix& gen, Vector& v, int substeps, double dt) {
    for (int step = 0; step < substeps; ++step) {
      Vector term = v;
      for (int k = 1; k <= 60; ++k) {
        term = (dt / k) * (gen * term);
        v += term;
        if (term.norm() < 1e-15) break;
      }
    }
  }

  // Davies dissipators map operators that are block diagonal over the
  // degenerate groups (in the eigenbasis) to block-diagonal operators, so such
  // states evolve inside a space of dimension sum_g d_g^2.
  Vector to_group_blocks(const Matrix& x_eig) const {
    Eigen::Index total = 0;
    for (auto d : sd_.group_size) total += d * d;
    Vector v(total);
    Eigen::Index k = 0;
    for (std::size_t g = 0; g < sd_.num_groups(); ++g) {
      const auto s0 = sd_.group_start[g], d = sd_.group_size[g];
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) v(k++) = x_eig(s0 + i, s0 + j);
      }
    }
    return v;
  }

  Matrix from_group_blocks(const Vector& v) const {
    const Eigen::Index dim = h_.dense.rows();
    Matrix x = Matrix::Zero(dim, dim);
    Eigen::Index k = 0;
    for (std::size_t g = 0; g < sd_.num_groups(); ++g) {
      const auto s0 = sd_.group_start[g], d = sd_.group_size[g];
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) x(s0 + i, s0 + j) = v(k++);
      }
    }
    return x;
  }

  /// Dissipator of jump a on the group-block coordinates, built on first use.
  const Matrix& block_generator(std::size_t a) const {
    if (block_gens_.size() != jumps_.size()) block_gens_.resize(jumps_.size());
    auto& slot = block_gens_[a];
    if (!slot) {
      const auto& d = jumps_[a];
      const Matrix& u = sd_.eig.vectors;
      const Matrix m = u.adjoint() * d.m * u;
      std::vector<Matrix> left, right;
      for (std::size_t k = 0; k < d.blocks.size(); ++k) {
        left.push_back(u.adjoint() * d.b[k] * u);
        right.push_back(u.adjoint() * d.blocks.blocks[k].adjoint() * u);
      }
      const Eigen::Index size = to_group_blocks(m).size();
      Matrix gen(size, size);
      for (Eigen::Index c = 0; c < size; ++c) {
        const Matrix e = from_group_blocks(Vector::Unit(size, c));
        Matrix out = -0.5 * (m * e + e * m);
        for (std::size_t k = 0; k < left.size(); ++k) out += left[k] * e * right[k];
        gen.col(c) = to_group_blocks(out);
      }
      slot = std::move(gen);
    }
    return *slot;
  }

  /// Dissipator of jump a alone, built on first use.
  const Matrix& jump_superoperator(std::size_t a) const {
    if (superops_.size() != jumps_.size()) superops_.resize(jumps_.size());
    auto& slot = superops_[a];
    if (!slot) {
      const auto& d = jumps_[a];
      const Matrix id = identity(d.m.rows());
      Matrix sup = -0.5 * (kron(id, d.m) + kron(d.m.transpose(), id));
      for (std::size_t k = 0; k < d.blocks.size(); ++k) sup += kron(d.blocks.blocks[k].conjugate(), d.b[k]);
      slot = std::move(sup);
    }
    return *slot;
  }

  void validate_config() const {
    const auto& b = cfg_.bath;
    if (!std::isfinite(b.lambda0) || b.lambda0 <= 0.0) fail(ErrorKind::InvalidArgument, "lambda0 must be > 0");
    if (cfg_.zero_temperature) {
      if (!cfg_.davies) fail(ErrorKind::InvalidArgument, "zero temperature requires the Davies limit");
      if (!(cfg_.beta_cap > 0.0)) fail(ErrorKind::InvalidArgument, "beta_cap must be > 0");
    } else if (!std::isfinite(b.beta) || b.beta < 0.0) {
      fail(ErrorKind::InvalidArgument, "beta must be finite and >= 0");
    }
    if (!cfg_.davies) b.validate();
    if (cfg_.secular_mu && cfg_.davies) fail(ErrorKind::InvalidArgument, "secular_mu needs finite tau");
  }

  void check_jumps(const std::vector<LabeledJump>& jumps) const {
    if (jumps.empty()) fail(ErrorKind::InvalidArgument, "at least one jump operator is required");
    for (const auto& j : jumps) {
      check_same_dim(j.op, h_.dense, "jump operator");
      check_finite(j.op, "jump operator");
      const double n = op_norm(j.op.adjoint() * j.op);
      if (n > 1.0 + 1e-10) {
        fail(ErrorKind::InvalidArgument, "jump '" + j.label + "' has ||A^dag A|| = " + std::to_string(n) + " > 1");
      }
      bool closed = false;
      const Matrix adj = j.op.adjoint();
      for (const auto& other : jumps) {
        if ((other.op - adj).norm() <= 1e-10 * std::max(1.0, adj.norm())) {
          closed = true;
          break;
        }
      }
      if (!closed) fail(ErrorKind::InvalidArgument, "jump set is not closed under adjoint ('" + j.label + "')");
    }
  }

  void build_kernels() {
    std::vector<bool> need(sd_.bohr_freqs.size(), false);
    for (const auto& d : jumps_) {
      for (std::size_t f : d.blocks.freq_index) {
        need[f] = true;
        need[sd_.bohr_freqs.size() - 1 - f] = true;  // -nu, by negation symmetry
      }
    }
    std::vector<double> freqs;
    table_index_.assign(sd_.bohr_freqs.size(), -1);
    for (std::size_t f = 0; f < need.size(); ++f) {
      if (!need[f]) continue;
      table_index_[f] = static_cast<int>(freqs.size());
      freqs.push_back(sd_.bohr_freqs[f]);
    }
    correlation_.emplace(cfg_.bath);
    kernels_ = build_kernel_table(freqs, *correlation_, cfg_.include_lamb_shift);
    if (cfg_.secular_mu) {
      for (std::size_t i = 0; i < freqs.size(); ++i) {
        for (std::size_t j = i; j < freqs.size(); ++j) {
          const double v = overlap_kernel_frequency(freqs[i], freqs[j], cfg_.bath, cfg_.secular_mu).value;
          kernels_->overlap[i][j] = kernels_->overlap[j][i] = v;
        }
      }
    }
  }

  double overlap(std::size_t fp, std::size_t f) const {
    if (cfg_.davies) return fp == f ? davies_weight(sd_.bohr_freqs[f]) : 0.0;
    return kernels_->overlap[static_cast<std::size_t>(table_index_[fp])][static_cast<std::size_t>(table_index_[f])];
  }

  void assemble_jump(JumpData& d) const {
    const auto dim = h_.dense.rows();
    const auto& bl = d.blocks;
    d.m = Matrix::Zero(dim, dim);
    for (std::size_t kp = 0; kp < bl.size(); ++kp) {
      Matrix b = Matrix::Zero(dim, dim);
      for (std::size_t k = 0; k < bl.size(); ++k) {
        const double c = overlap(bl.freq_index[kp], bl.freq_index[k]);
        if (c != 0.0) b += c * bl.blocks[k];
      }
      d.m += bl.blocks[kp].adjoint() * b;
      d.b.push_back(std::move(b));
    }
    d.lamb = Matrix::Zero(dim, dim);
    if (!cfg_.davies && cfg_.include_lamb_shift) {
      // H_LS = sum K(nu2, nu1) (A_{-nu2})^dag A_{nu1}; block k2 carries A_{-nu2}.
      const std::size_t nf = sd_.bohr_freqs.size();
      Matrix raw = Matrix::Zero(dim, dim);
      for (std::size_t k2 = 0; k2 < bl.size(); ++k2) {
        const auto nu2 = static_cast<std::size_t>(table_index_[nf - 1 - bl.freq_index[k2]]);
        for (std::size_t k1 = 0; k1 < bl.size(); ++k1) {
          const auto nu1 = static_cast<std::size_t>(table_index_[bl.freq_index[k1]]);
          raw += kernels_->lamb[nu2][nu1] * bl.blocks[k2].adjoint() * bl.blocks[k1];
        }
      }
      d.lamb_defect = 0.5 * op_norm(raw - raw.adjoint());
      const double scale = op_norm(d.op.adjoint() * d.op);
      if (d.lamb_defect > 1e-6 * std::max(scale, 1e-300)) {
        fail(ErrorKind::LambHermiticityDefect, "jump '" + d.label + "' Lamb shift defect " +
                                                   std::to_string(d.lamb_defect));
      }
      d.lamb = hermitian_part(raw);
    }
    const Matrix& h = h_.dense;
    Matrix g = -0.5 * (d.m * h + h * d.m);
    for (std::size_t k = 0; k < bl.size(); ++k) g += bl.blocks[k].adjoint() * h * d.b[k];
    g += Complex(0.0, 1.0) * commutator(d.lamb, h);
    d.gradient = hermitian_part(g);
    d.m_norm = op_norm(d.m);
    d.lamb_norm = op_norm(d.lamb);
  }

  Matrix coherent_part(const WeightVector& w, bool include_coherent) const {
    Matrix coh = include_coherent ? h_.dense : Matrix::Zero(h_.dense.rows(), h_.dense.cols());
    for (std::size_t a = 0; a < jumps_.size(); ++a) {
      if (w.alphas[a] != 0.0 && cfg_.include_lamb_shift && !cfg_.davies) coh += w.alphas[a] * jumps_[a].lamb;
    }
    return coh;
  }

  LocalHamiltonian h_;
  LindbladConfig cfg_;
  SpectralData sd_;
  std::vector<JumpData> jumps_;
  std::optional<CorrelationTable> correlation_;
  std::optional<KernelTable> kernels_;
  std::vector<int> table_index_;
  double h_norm_ = 0.0;
  mutable std::vector<std::optional<Matrix>> superops_;
  mutable std::vector<std::optional<Matrix>> block_gens_;
};

/// Davies-limit adjoint; the model must have been built with davies = true.
inline Matrix davies_adjoint(const LindbladModel& model, std::size_t a, const Matrix& obs) {
  if (!model.config().davies) fail(ErrorKind::InvalidArgument, "davies_adjoint needs a Davies-limit model");
  return model.dissipative_adjoint(a, obs);
}

inline Matrix dissipative_adjoint(const LindbladModel& model, std::size_t a, const Matrix& obs) {
  require_hermitian(obs, "observable");
  return model.dissipative_adjoint(a, obs);
}

inline Matrix lamb_shift_operator(const LindbladModel& model, std::size_t a) {
  return model.lamb_shift_operator(a);
}

inline DensityMatrix evolve(const LindbladModel& model, const WeightVector& w, const DensityMatrix& rho, double s) {
  return model.evolve(w, rho, s);
}

/// X_q and their adjoints on every qubit: {X_0, ..., X_{n-1}}.
inline std::vector<LabeledJump> pauli_x_jumps(int n) {
  std::vector<LabeledJump> out;
  for (int q = 0; q < n; ++q) out.push_back({"X" + std::to_string(q), kron_embed(pauli_letter('X'), {q}, n)});
  return out;
}

}  // namespace thermoscape
