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
 * Coordinate-wise thermal gradient descent on exact density matrices.
 *
 * Each iteration scans the jumps in declared order, takes the first whose
 * gradient is below the trigger -0.99 eps, and evolves along that jump for
 * s = |g| / (9 B^2). The loop stops when no jump triggers.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "thermoscape/gradient.hpp"

namespace thermoscape {

struct DescentConfig {
  double epsilon = 1e-3;
  double B = 1.0;
  std::optional<std::int64_t> max_steps;  ///< default ceil(42 B^3 / eps^2)
  std::optional<double> grad_tol;         ///< default 0.0099 eps
  std::optional<double> trigger;          ///< default -0.99 eps
  bool noisy_gradients = false;
  std::uint64_t seed = 0;

  std::int64_t resolved_max_steps() const {
    return max_steps.value_or(static_cast<std::int64_t>(std::ceil(42.0 * B * B * B / (epsilon * epsilon))));
  }
  double resolved_grad_tol() const { return grad_tol.value_or(0.0099 * epsilon); }
  double resolved_trigger() const { return trigger.value_or(-0.99 * epsilon); }
  double step_size(double g) const { return std::abs(g) / (9.0 * B * B); }

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail(ErrorKind::InvalidArgument, "epsilon must be > 0");
    if (!(B > 0.0) || !std::isfinite(B)) fail(ErrorKind::InvalidArgument, "B must be > 0");
    if (resolved_max_steps() < 1) fail(ErrorKind::InvalidArgument, "max_steps must be >= 1");
    if (resolved_grad_tol() < 0.0) fail(ErrorKind::InvalidArgument, "grad_tol must be >= 0");
  }
};

struct DescentStep {
  std::int64_t index = 0;
  std::size_t jump = 0;
  std::string label;
  double g = 0.0;
  double s = 0.0;
  double energy_before = 0.0;
  double energy_after = 0.0;
};

struct DescentTrace {
  std::vector<DescentStep> steps;
  DensityMatrix terminal_state = DensityMatrix::maximally_mixed(1);
  CertificateResult terminal_certificate;
  /// True when the loop stopped because no jump triggered.
  bool terminated_early = false;
  double terminal_energy = 0.0;
};

/// Raised when max_steps is reached; carries the partial trace.
class DescentLimitError : public Error {
 public:
  DescentLimitError(const std::string& msg, DescentTrace trace)
      : Error(ErrorKind::MaxStepsExceeded, msg), trace_(std::move(trace)) {}
  const DescentTrace& trace() const { return trace_; }

 private:
  DescentTrace trace_;
};

/// One evolution along jump a_star with s = |g| / (9 B^2); needs g < trigger.
inline DensityMatrix cool_step(const LindbladModel& model, const DensityMatrix& rho, std::size_t a_star, double g,
                               const DescentConfig& cfg) {
  if (!(g < cfg.resolved_trigger())) {
    fail(ErrorKind::TriggerNotMet, "gradient " + std::to_string(g) + " is not below the trigger " +
                                       std::to_string(cfg.resolved_trigger()));
  }
  return model.evolve(WeightVector::unit(model.num_jumps(), a_star), rho, cfg.step_size(g));
}

inline DescentTrace thermal_gradient_descent(const LindbladModel& model, const DensityMatrix& rho0,
                                             const DescentConfig& cfg) {
  cfg.validate();
  check_same_dim(rho0.mat(), model.hamiltonian().dense, "initial state");
  const Matrix& h = model.hamiltonian().dense;
  const std::int64_t max_steps = cfg.resolved_max_steps();
  const double trigger = cfg.resolved_trigger();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.resolved_grad_tol());

  DescentTrace trace;
  DensityMatrix rho = rho0;
  double energy = expectation(h, rho);
  for (std::int64_t step = 0;; ++step) {
    std::optional<std::size_t> chosen;
    double g_chosen = 0.0;
    for (std::size_t a = 0; a < model.num_jumps(); ++a) {
      double g = real_trace_product(gradient_operator(model, a), rho.mat());
      if (cfg.noisy_gradients) g += noise(rng);
      if (g < trigger) {
        chosen = a;
        g_chosen = g;
        break;
      }
    }
    if (!chosen) {
      trace.terminated_early = true;
      break;
    }
    if (step >= max_steps) {
      trace.terminal_state = rho;
      trace.terminal_energy = energy;
      throw DescentLimitError("descent did not terminate within " + std::to_string(max_steps) + " steps",
                              std::move(trace));
    }
    DensityMatrix next = cool_step(model, rho, *chosen, g_chosen, cfg);
    const double e_next = real_trace_product(h, next.mat());
    trace.steps.push_back(
        {step, *chosen, model.jump(*chosen).label, g_chosen, cfg.step_size(g_chosen), energy, e_next});
    rho = std::move(next);
    energy = e_next;
  }
  trace.terminal_state = rho;
  trace.terminal_energy = energy;
  trace.terminal_certificate = certify_local_min(model, rho, cfg.epsilon);
  return trace;
}

/// Guaranteed energy drop for a step with |g| >= 0.99 eps.
inline double guaranteed_drop(const DescentConfig& cfg) {
  const double e = 0.99 * cfg.epsilon;
  return e * e / (20.0 * cfg.B * cfg.B);
}

}  // namespace thermoscape
