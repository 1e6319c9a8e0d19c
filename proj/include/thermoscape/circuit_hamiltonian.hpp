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
 * Circuit-to-Hamiltonian construction H_C = H_clock + H_in + H_prop on n
 * system qubits followed by T clock qubits.
 *
 * Clock states are unary, |C_t> = |1^t 0^{T-t}>, and H_clock penalizes the
 * substring 01. Clock qubit t (1-based) is register site n + t - 1.
 */

#include <cmath>
#include <string>
#include <vector>

#include "thermoscape/hamiltonian.hpp"
#include "thermoscape/lindblad.hpp"

namespace thermoscape {

struct Gate {
  std::string name;
  Matrix matrix;
  std::vector<int> sites;
};

inline constexpr double kUnitarityTol = 1e-10;

/// Matrix of a named gate; CNOT takes (control, target).
inline Matrix named_gate_matrix(const std::string& name) {
  using namespace std::complex_literals;
  if (name == "I") return identity(2);
  if (name == "X" || name == "Y" || name == "Z") return pauli_letter(name[0]);
  if (name == "H") {
    Matrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return h / std::sqrt(2.0);
  }
  if (name == "T") {
    Matrix t = identity(2);
    t(1, 1) = std::exp(1i * (M_PI / 4.0));
    return t;
  }
  if (name == "CNOT") {
    Matrix c = Matrix::Zero(4, 4);
    c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
    return c;
  }
  fail(ErrorKind::InvalidArgument, "unknown gate '" + name + "'");
}

inline Gate make_gate(const std::string& name, std::vector<int> sites) {
  return Gate{name, named_gate_matrix(name), std::move(sites)};
}

struct CircuitSpec {
  int n = 0;
  int t0 = 0;
  std::vector<Gate> gates;                ///< U_1 ... U_T, padding included
  std::vector<int> first_action_times;    ///< t_j in [1, T]
  std::vector<int> last_action_times;     ///< T_j in [0, T]; 0 if never acted on

  int T() const { return static_cast<int>(gates.size()); }
  int L() const { return T() - 2 * t0; }
  /// t0 = c L^2.
  double c() const { return static_cast<double>(t0) / (static_cast<double>(L()) * L()); }
};

inline bool is_identity_gate(const Gate& g) {
  return (g.matrix - identity(g.matrix.rows())).norm() <= 1e-12;
}

/// Validates gates and derives t_j, T_j. Qubits never acted on get t_j = t0 + 1.
inline CircuitSpec make_circuit(int n, int t0, std::vector<Gate> gates) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "circuit needs n >= 1");
  if (t0 < 0) fail(ErrorKind::InvalidArgument, "t0 must be >= 0");
  const int T = static_cast<int>(gates.size());
  if (T < 2) fail(ErrorKind::InvalidArgument, "circuit needs at least 2 gates");
  if (T - 2 * t0 < 1) fail(ErrorKind::InvalidArgument, "circuit needs L = T - 2 t0 >= 1");
  if (n + T > kMaxQubits) {
    fail(ErrorKind::SizeLimit, "n + T = " + std::to_string(n + T) + " exceeds " + std::to_string(kMaxQubits));
  }
  CircuitSpec cs;
  cs.n = n;
  cs.t0 = t0;
  cs.first_action_times.assign(static_cast<std::size_t>(n), 0);
  cs.last_action_times.assign(static_cast<std::size_t>(n), 0);
  for (int t = 1; t <= T; ++t) {
    const Gate& g = gates[static_cast<std::size_t>(t - 1)];
    const auto k = static_cast<int>(g.sites.size());
    if (k < 1 || g.matrix.rows() != (Eigen::Index{1} << k) || g.matrix.cols() != g.matrix.rows()) {
      fail(ErrorKind::DimensionMismatch, "gate " + std::to_string(t) + " matrix does not match its sites");
    }
    for (int s : g.sites) {
      if (s < 0 || s >= n) fail(ErrorKind::SiteOutOfRange, "gate " + std::to_string(t) + " site " + std::to_string(s));
    }
    check_finite(g.matrix, "gate");
    if ((g.matrix.adjoint() * g.matrix - identity(g.matrix.rows())).norm() > kUnitarityTol) {
      fail(ErrorKind::NonUnitaryGate, "gate " + std::to_string(t) + " ('" + g.name + "') is not unitary");
    }
    const bool padding = t <= t0 || t > T - t0;
    if (is_identity_gate(g)) continue;
    if (padding) fail(ErrorKind::InvalidArgument, "padding gate " + std::to_string(t) + " is not the identity");
    for (int s : g.sites) {
      auto& first = cs.first_action_times[static_cast<std::size_t>(s)];
      if (first == 0) first = t;
      cs.last_action_times[static_cast<std::size_t>(s)] = t;
    }
  }
  for (auto& tj : cs.first_action_times) {
    if (tj == 0) tj = t0 + 1;
  }
  cs.gates = std::move(gates);
  return cs;
}

/// xi_t = 2^{-T} binom(T, t), t = 0..T.
inline std::vector<double> xi_weights(int T) {
  std::vector<double> xi(static_cast<std::size_t>(T) + 1);
  for (int t = 0; t <= T; ++t) {
    xi[static_cast<std::size_t>(t)] =
        std::exp(std::lgamma(T + 1.0) - std::lgamma(t + 1.0) - std::lgamma(T - t + 1.0) - T * std::log(2.0));
  }
  return xi;
}

/// e^{-1/(4c)} / (T + 1): lower bound on xi_t for t in [t0, T - t0]. The
/// binomial ratio f(L) in the standard argument tends to e^{-1/(4c)}.
inline double xi_center_lower_bound(const CircuitSpec& cs) {
  return std::exp(-1.0 / (4.0 * cs.c())) / (cs.T() + 1.0);
}

/// e^{-c/4} / (T + 1). Implied by xi_center_lower_bound only when c >= 1;
/// for c < 1 it fails already at small sizes (L = 3, t0 = 1).
inline double xi_center_bound_c_over_4(const CircuitSpec& cs) {
  return std::exp(-cs.c() / 4.0) / (cs.T() + 1.0);
}

inline Matrix embedded_gate(const CircuitSpec& cs, int t) {
  const Gate& g = cs.gates.at(static_cast<std::size_t>(t - 1));
  return kron_embed(g.matrix, g.sites, cs.n);
}

/// U_t ... U_1 |x> on the system register.
inline Vector evolved_input(const CircuitSpec& cs, std::int64_t x, int t) {
  Vector v = Vector::Zero(qubit_dim(cs.n));
  v(x) = 1.0;
  for (int s = 1; s <= t; ++s) v = embedded_gate(cs, s) * v;
  return v;
}

/// Index of |C_t> = |1^t 0^{T-t}> in the clock register.
inline std::int64_t clock_index(int T, int t) {
  return ((std::int64_t{1} << t) - 1) << (T - t);
}

/// |eta_{x,t}> = (U_t ... U_1 |x>) (x) |C_t>.
inline Vector eta_state(const CircuitSpec& cs, std::int64_t x, int t) {
  Vector clock = Vector::Zero(qubit_dim(cs.T()));
  clock(clock_index(cs.T(), t)) = 1.0;
  return kron(evolved_input(cs, x, t), clock);
}

/// sum_t sqrt(xi_t) |eta_{x,t}>; x = 0 gives the history ground state.
inline Vector history_state(const CircuitSpec& cs, std::int64_t x = 0) {
  const auto xi = xi_weights(cs.T());
  Vector out = Vector::Zero(qubit_dim(cs.n + cs.T()));
  for (int t = 0; t <= cs.T(); ++t) out += std::sqrt(xi[static_cast<std::size_t>(t)]) * eta_state(cs, x, t);
  return out;
}

struct ClockHamiltonian {
  int num_qubits = 0;
  double J_clock = 1.0;
  double J_in = 0.0;
  double J_prop = 0.0;
  std::vector<double> f;   ///< f_1 .. f_{T-1} (index 0 unused)
  std::vector<double> g;   ///< g_j
  std::vector<double> h;   ///< h_1 .. h_T (index 0 unused)
  std::vector<double> xi;  ///< xi_0 .. xi_T
  LocalHamiltonian clock;
  LocalHamiltonian in;
  LocalHamiltonian prop;
  LocalHamiltonian full;   ///< H_C

  const Matrix& H_clock() const { return clock.dense; }
  const Matrix& H_in() const { return in.dense; }
  const Matrix& H_prop() const { return prop.dense; }
  const Matrix& H_C() const { return full.dense; }
};

namespace detail {

inline Matrix ket_bra(const std::string& ket, const std::string& bra) {
  Matrix m = Matrix::Zero(Eigen::Index{1} << ket.size(), Eigen::Index{1} << bra.size());
  m(bitstring_index(ket), bitstring_index(bra)) = 1.0;
  return m;
}

inline std::vector<int> concat_sites(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace detail

inline ClockHamiltonian build_clock_hamiltonian(const CircuitSpec& cs, double J_in, double J_prop) {
  if (!(J_in > 0.0) || !(J_prop > 0.0)) fail(ErrorKind::InvalidArgument, "J_in and J_prop must be > 0");
  const int n = cs.n;
  const int T = cs.T();
  const int N = n + T;
  check_qubit_count(N);
  auto clk = [n](int t) { return n + t - 1; };

  ClockHamiltonian hc;
  hc.num_qubits = N;
  hc.J_in = J_in;
  hc.J_prop = J_prop;
  hc.xi = xi_weights(T);
  hc.f.assign(static_cast<std::size_t>(T), 0.0);
  for (int t = 1; t < T; ++t) hc.f[static_cast<std::size_t>(t)] = static_cast<double>(T - t) / T;
  hc.h.assign(static_cast<std::size_t>(T) + 1, 0.0);
  for (int t = 1; t <= T; ++t) hc.h[static_cast<std::size_t>(t)] = std::sqrt(static_cast<double>(t) * (T - t + 1));
  for (int j = 0; j < n; ++j) {
    hc.g.push_back(1.0 / hc.xi[static_cast<std::size_t>(cs.first_action_times[static_cast<std::size_t>(j)] - 1)]);
  }

  std::vector<LocalTerm> clock_terms;
  for (int t = 1; t < T; ++t) {
    clock_terms.push_back({hc.J_clock * hc.f[static_cast<std::size_t>(t)] * detail::ket_bra("01", "01"),
                           {clk(t), clk(t + 1)}});
  }

  // |10><10|_{t_j-1,t_j} restricted to unary strings is |C_{t_j-1}><C_{t_j-1}|;
  // for t_j = 1 that projector is |0><0| on clock qubit 1.
  std::vector<LocalTerm> in_terms;
  const Matrix one = detail::ket_bra("1", "1");
  for (int j = 0; j < n; ++j) {
    const int tj = cs.first_action_times[static_cast<std::size_t>(j)];
    const double w = J_in * hc.g[static_cast<std::size_t>(j)];
    if (tj == 1) {
      in_terms.push_back({w * kron(one, detail::ket_bra("0", "0")), {j, clk(1)}});
    } else {
      in_terms.push_back({w * kron(one, detail::ket_bra("10", "10")), {j, clk(tj - 1), clk(tj)}});
    }
  }

  std::vector<LocalTerm> prop_terms;
  for (int t = 1; t <= T; ++t) {
    const Gate& gate = cs.gates[static_cast<std::size_t>(t - 1)];
    Matrix fwd;
    std::vector<int> clock_sites;
    if (t == 1) {
      fwd = detail::ket_bra("10", "00");
      clock_sites = {clk(1), clk(2)};
    } else if (t == T) {
      fwd = detail::ket_bra("11", "10");
      clock_sites = {clk(T - 1), clk(T)};
    } else {
      fwd = detail::ket_bra("110", "100");
      clock_sites = {clk(t - 1), clk(t), clk(t + 1)};
    }
    const Matrix hop = kron(gate.matrix, fwd);
    const Eigen::Index d = hop.rows();
    Matrix term = identity(d) - hc.h[static_cast<std::size_t>(t)] * (hop + hop.adjoint());
    prop_terms.push_back({0.5 * J_prop * term, detail::concat_sites(gate.sites, clock_sites)});
  }

  std::vector<LocalTerm> all = clock_terms;
  all.insert(all.end(), in_terms.begin(), in_terms.end());
  all.insert(all.end(), prop_terms.begin(), prop_terms.end());
  hc.clock = assemble(std::move(clock_terms), N);
  hc.in = assemble(std::move(in_terms), N);
  hc.prop = assemble(std::move(prop_terms), N);
  hc.full = assemble(std::move(all), N);
  return hc;
}

/// P_1 H_prop P_1 in the basis |eta_{x,0}>, ..., |eta_{x,T}>:
/// J_prop T / 2 on the diagonal and -J_prop h_t / 2 linking t-1 and t.
inline Eigen::MatrixXd effective_prop_block(const CircuitSpec& cs, std::int64_t x, double J_prop) {
  if (x < 0 || x >= qubit_dim(cs.n)) fail(ErrorKind::InvalidArgument, "input string out of range");
  const int T = cs.T();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(T + 1, T + 1);
  for (int t = 0; t <= T; ++t) b(t, t) = 0.5 * J_prop * T;
  for (int t = 1; t <= T; ++t) {
    const double off = -0.5 * J_prop * std::sqrt(static_cast<double>(t) * (T - t + 1));
    b(t, t - 1) = off;
    b(t - 1, t) = off;
  }
  return b;
}

struct ObservableReduction {
  int T_j = 0;
  double p_gt = 0.0;             ///< sum_{t > T_j} xi_t
  double hoeffding_bound = 0.0;  ///< exp(-2T (1/2 - (cL^2 + L/4)/(2cL^2 + L))^2)
  double exact_eps = 0.0;        ///< sum_{t <= T_j} xi_t <Z_j>_t
  double z_output = 0.0;         ///< <0^n| U_C^dag Z_j U_C |0^n>
};

inline ObservableReduction observable_reduction(const CircuitSpec& cs, int j) {
  if (j < 0 || j >= cs.n) fail(ErrorKind::SiteOutOfRange, "qubit " + std::to_string(j));
  const int T = cs.T();
  const auto xi = xi_weights(T);
  const Matrix z = kron_embed(pauli_letter('Z'), {j}, cs.n);
  ObservableReduction r;
  r.T_j = cs.last_action_times[static_cast<std::size_t>(j)];
  Vector v = Vector::Zero(qubit_dim(cs.n));
  v(0) = 1.0;
  for (int t = 0; t <= T; ++t) {
    if (t > 0) v = embedded_gate(cs, t) * v;
    const double zt = v.dot(z * v).real();
    if (t <= r.T_j) {
      r.exact_eps += xi[static_cast<std::size_t>(t)] * zt;
    } else {
      r.p_gt += xi[static_cast<std::size_t>(t)];
    }
    if (t == T) r.z_output = zt;
  }
  const double cl2 = cs.c() * cs.L() * cs.L();
  const double gap = 0.5 - (cl2 + cs.L() / 4.0) / (2.0 * cl2 + cs.L());
  r.hoeffding_bound = std::exp(-2.0 * T * gap * gap);
  return r;
}

/// {X_t, Z_t on clock qubits} followed by {X_j (x) |0><0|_{t_j}}.
inline std::vector<LabeledJump> clock_jump_preset(const CircuitSpec& cs) {
  const int N = cs.n + cs.T();
  std::vector<LabeledJump> out;
  for (int t = 1; t <= cs.T(); ++t) {
    out.push_back({"Xc" + std::to_string(t), kron_embed(pauli_letter('X'), {cs.n + t - 1}, N)});
    out.push_back({"Zc" + std::to_string(t), kron_embed(pauli_letter('Z'), {cs.n + t - 1}, N)});
  }
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  for (int j = 0; j < cs.n; ++j) {
    const int tj = cs.first_action_times[static_cast<std::size_t>(j)];
    out.push_back({"F" + std::to_string(j), kron_embed(kron(pauli_letter('X'), p0), {j, cs.n + tj - 1}, N)});
  }
  return out;
}

}  // namespace thermoscape
