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
 * Scalar bath functions: the Glauber transition weight, the rectangular time
 * window and its Fourier transform, the bath correlation function, and the
 * two kernels that the Lindbladian is assembled from.
 *
 * Kernels are evaluated in the time-difference variable u = t2 - t1. The
 * integral over the window centre is analytic, leaving a 1D integral over
 * [0, min(tau, U)] with U the numerical support of c_beta. The cost is then
 * independent of tau. A frequency-domain route is kept for secular
 * truncation and as an independent check.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "thermoscape/error.hpp"
#include "thermoscape/quadrature.hpp"

namespace thermoscape {

enum class WeightKind { Glauber };

struct BathSpec {
  double beta = 1.0;
  double tau = 1.0;
  double lambda0 = 1.0;
  WeightKind weight = WeightKind::Glauber;

  void validate() const {
    if (!std::isfinite(beta) || beta < 0.0) fail(ErrorKind::InvalidArgument, "beta must be finite and >= 0");
    if (!std::isfinite(tau) || tau <= 0.0) fail(ErrorKind::InvalidArgument, "tau must be finite and > 0");
    if (!std::isfinite(lambda0) || lambda0 <= 0.0) {
      fail(ErrorKind::InvalidArgument, "lambda0 must be finite and > 0");
    }
  }
};

inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811;
inline constexpr double kDefaultBetaCap = 1e6;

/// 1 / (2 + ln(1 + beta * lambda0)).
inline double glauber_prefactor(double beta, double lambda0) {
  return 1.0 / (2.0 + std::log1p(beta * lambda0));
}

/// 1 / (1 + e^x) without overflow.
inline double fermi(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

inline double gamma(double omega, double beta, double lambda0) {
  return glauber_prefactor(beta, lambda0) * std::exp(-omega * omega / (2.0 * lambda0 * lambda0)) *
         fermi(beta * omega);
}

inline double gamma(double omega, const BathSpec& spec) {
  return gamma(omega, spec.beta, spec.lambda0);
}

/// beta = infinity weight: no heating, Gaussian cooling with the prefactor at beta_cap.
inline double gamma_zero_temperature(double omega, double lambda0, double beta_cap = kDefaultBetaCap) {
  if (omega > 0.0) return 0.0;
  const double g = glauber_prefactor(beta_cap, lambda0) * std::exp(-omega * omega / (2.0 * lambda0 * lambda0));
  return omega == 0.0 ? 0.5 * g : g;
}

/// Fourier transform of the normalized box window of width tau (real, even).
inline double window_hat(double omega, double tau) {
  const double x = 0.5 * omega * tau;
  if (std::abs(x) < 1e-8) return std::sqrt(tau / (2.0 * std::numbers::pi)) * (1.0 - x * x / 6.0);
  return std::sqrt(2.0 / (std::numbers::pi * tau)) * std::sin(x) / omega;
}

/// Mass of |window_hat|^2 outside |omega| < mu. Substituting x = omega tau / 2
/// gives (2/pi) * int_{mu tau/2}^inf sin^2 x / x^2 dx; beyond x = 1e5 the
/// integrand is replaced by its mean 1/(2x^2).
inline double window_tail_mass(double mu, double tau) {
  constexpr double kX1 = 1e5;
  const double x0 = 0.5 * mu * tau;
  auto f = [](double x) {
    if (std::abs(x) < 1e-6) return 1.0 - x * x / 3.0;
    const double s = std::sin(x) / x;
    return s * s;
  };
  double inner = 0.0;
  if (x0 < kX1) {
    quad::Options opt;
    opt.abs_tol = 1e-11;
    opt.initial_panels = static_cast<int>(std::ceil((kX1 - x0) / std::numbers::pi));
    opt.max_panels = opt.initial_panels + 100000;
    inner = quad::integrate_or_throw<double>(f, x0, kX1, opt, "window tail");
  }
  const double far = 1.0 / (2.0 * std::max(x0, kX1));
  return 2.0 / std::numbers::pi * (inner + far);
}

/// Dawson's integral e^{-x^2} int_0^x e^{t^2} dt.
inline double dawson(double x) {
  if (x < 0.0) return -dawson(-x);
  if (x == 0.0) return 0.0;
  if (x > 7.0) {
    // Asymptotic series sum_k (2k-1)!! / (2^{k+1} x^{2k+1}).
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0 / (2.0 * x);
    double sum = term;
    for (int k = 1; k < 30; ++k) {
      term *= (2.0 * k - 1.0) * inv2x2;
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum;
  }
  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-14;
  opt.initial_panels = 4;
  return quad::integrate_or_throw<double>([x](double t) { return std::exp((t - x) * (t + x)); }, 0.0, x,
                                          opt, "dawson");
}

/// Frequency support used for all integrals against gamma.
inline double omega_cutoff(const BathSpec& spec) { return 9.0 * spec.lambda0; }

/// c_beta(t) = (1/sqrt(2 pi)) int gamma(w) e^{i w t} dw by direct quadrature.
inline std::complex<double> bath_correlation(double t, const BathSpec& spec, double abs_tol = 1e-12) {
  spec.validate();
  const double w = omega_cutoff(spec);
  quad::Options opt;
  opt.abs_tol = abs_tol * kSqrt2Pi;
  opt.initial_panels = std::max(4, static_cast<int>(std::ceil(2.0 * w * std::abs(t) / std::numbers::pi)));
  opt.max_panels = opt.initial_panels + 100000;
  auto f = [&](double om) { return gamma(om, spec) * std::polar(1.0, om * t); };
  return quad::integrate_or_throw<std::complex<double>>(f, -w, w, opt, "bath correlation") / kSqrt2Pi;
}

/// Time beyond which |c_beta| is below ~1e-16: Gaussian decay of the real
/// part and e^{-pi u / beta} decay of the imaginary part.
inline double correlation_support(const BathSpec& spec) { return 9.0 / spec.lambda0 + 12.0 * spec.beta; }

/**
 * c_beta on a uniform grid over [0, min(U, tau)] with 6-point Lagrange
 * interpolation; the kernels never need c beyond tau.
 *
 * Values come from the split form
 *   Re c(u) = (N Lambda0 / 2) e^{-Lambda0^2 u^2 / 2}
 *   Im c(u) = -(N / sqrt(2 pi)) [sqrt(2) Lambda0 D(Lambda0 u / sqrt(2)) - F(u)]
 *   F(u)    = int_0^inf e^{-w^2/2Lambda0^2} 2/(e^{beta w}+1) sin(w u) dw
 * which is independent of the direct quadrature in bath_correlation().
 */
class CorrelationTable {
 public:
  explicit CorrelationTable(const BathSpec& spec) : spec_(spec) {
    spec.validate();
    h_ = 0.01 / spec.lambda0;
    support_ = std::min(correlation_support(spec), spec.tau);
    const auto n = static_cast<std::size_t>(std::ceil(support_ / h_)) + kPad + 1;
    values_.resize(n);
    for (std::size_t k = 0; k < n; ++k) values_[k] = split_value(static_cast<double>(k) * h_);
  }

  const BathSpec& spec() const { return spec_; }
  double support() const { return support_; }
  double spacing() const { return h_; }

  std::complex<double> operator()(double u) const {
    if (u < 0.0) return std::conj((*this)(-u));
    if (u > support_) return bath_correlation(u, spec_);
    const double x = u / h_;
    auto base = static_cast<std::ptrdiff_t>(std::floor(x)) - 2;
    std::complex<double> acc = 0.0;
    for (std::ptrdiff_t i = 0; i < 6; ++i) {
      double w = 1.0;
      for (std::ptrdiff_t j = 0; j < 6; ++j) {
        if (j != i) w *= (x - static_cast<double>(base + j)) / static_cast<double>(i - j);
      }
      acc += w * sample(base + i);
    }
    return acc;
  }

 private:
  static constexpr std::size_t kPad = 4;

  std::complex<double> sample(std::ptrdiff_t k) const {
    if (k < 0) return std::conj(values_[static_cast<std::size_t>(-k)]);
    return values_[static_cast<std::size_t>(k)];
  }

  std::complex<double> split_value(double u) const {
    const double l0 = spec_.lambda0;
    const double n = glauber_prefactor(spec_.beta, l0);
    const double re = 0.5 * n * l0 * std::exp(-0.5 * l0 * l0 * u * u);
    if (spec_.beta == 0.0 || u == 0.0) return {re, 0.0};
    const double wmax = std::min(9.0 * l0, 40.0 / spec_.beta);
    quad::Options opt;
    opt.abs_tol = 1e-14;
    opt.initial_panels = std::max(2, static_cast<int>(std::ceil(wmax * u / std::numbers::pi)));
    opt.max_panels = opt.initial_panels + 100000;
    auto f = [&](double w) {
      return std::exp(-w * w / (2.0 * l0 * l0)) * 2.0 * fermi(spec_.beta * w) * std::sin(w * u);
    };
    const double big_f = quad::integrate_or_throw<double>(f, 0.0, wmax, opt, "correlation table");
    const double im = -(n / kSqrt2Pi) * (std::numbers::sqrt2 * l0 * dawson(l0 * u / std::numbers::sqrt2) - big_f);
    return {re, im};
  }

  BathSpec spec_;
  double h_ = 0.0;
  double support_ = 0.0;
  std::vector<std::complex<double>> values_;
};

/// Integral of the window centre over a segment of length len: 2 sin(sigma len/2)/sigma.
inline double center_integral(double sigma, double len) {
  const double x = 0.5 * sigma * len;
  if (std::abs(x) < 1e-8) return len * (1.0 - x * x / 6.0);
  return 2.0 * std::sin(x) / sigma;
}

struct KernelValue {
  double value = 0.0;
  double abs_error = 0.0;
};

namespace detail {

inline quad::Options kernel_options(double upper, double max_freq, double abs_tol) {
  quad::Options opt;
  opt.abs_tol = abs_tol;
  opt.initial_panels =
      std::max(4, static_cast<int>(std::ceil(upper * std::max(max_freq, 1.0) / std::numbers::pi)));
  opt.max_panels = opt.initial_panels + 200000;
  return opt;
}

}  // namespace detail

/**
 * C(nu', nu) = int gamma(w) f^(w - nu') f^(w - nu) dw
 *            = 2/(sqrt(2 pi) tau) int_0^tau S(nu - nu', tau - u) Re(c(u) e^{-i(nu+nu')u/2}) du.
 * Real and symmetric. abs_tol applies to C itself.
 */
inline KernelValue overlap_kernel(double nu_prime, double nu, const CorrelationTable& c,
                                  double abs_tol = 1e-10) {
  const double tau = c.spec().tau;
  const double upper = std::min(tau, c.support());
  const double scale = 2.0 / (kSqrt2Pi * tau);
  const double sigma = nu - nu_prime;
  const double phi = 0.5 * (nu + nu_prime);
  auto f = [&](double u) {
    return center_integral(sigma, tau - u) * std::real(c(u) * std::polar(1.0, -phi * u));
  };
  auto r = quad::integrate<double>(f, 0.0, upper,
                                   detail::kernel_options(upper, std::abs(phi) + std::abs(sigma), abs_tol / scale));
  if (!r.converged) fail(ErrorKind::QuadratureFailure, "overlap kernel did not converge");
  return {scale * r.value, scale * r.abs_error};
}

/**
 * Lamb-shift kernel for H_LS = sum K(nu2, nu1) (A_{-nu2})^dag A_{nu1}:
 * K = 1/(sqrt(2 pi) tau) int_0^tau S(nu1 + nu2, tau - u) Im(c(u) e^{i(nu2-nu1)u/2}) du.
 * Real; K(nu2, nu1) = K(-nu1, -nu2).
 */
inline KernelValue lamb_kernel(double nu2, double nu1, const CorrelationTable& c, double abs_tol = 1e-8) {
  const double tau = c.spec().tau;
  const double upper = std::min(tau, c.support());
  const double scale = 1.0 / (kSqrt2Pi * tau);
  const double sigma = nu1 + nu2;
  const double psi = 0.5 * (nu2 - nu1);
  auto f = [&](double u) {
    return center_integral(sigma, tau - u) * std::imag(c(u) * std::polar(1.0, psi * u));
  };
  auto r = quad::integrate<double>(f, 0.0, upper,
                                   detail::kernel_options(upper, std::abs(psi) + std::abs(sigma), abs_tol / scale));
  if (!r.converged) fail(ErrorKind::QuadratureFailure, "Lamb kernel did not converge");
  return {scale * r.value, scale * r.abs_error};
}

/**
 * Frequency-domain overlap int_lo^hi weight(w) f^(w - nu') f^(w - nu) dw.
 * Panels start at half a window period so the 1/tau-wide peaks are resolved.
 */
inline KernelValue overlap_kernel_frequency(double nu_prime, double nu, double tau,
                                            const std::function<double(double)>& weight, double lo,
                                            double hi, double abs_tol = 1e-10) {
  if (!(hi > lo)) return {};
  quad::Options opt;
  opt.abs_tol = abs_tol;
  opt.initial_panels = std::clamp(static_cast<int>(std::ceil((hi - lo) * tau / std::numbers::pi)), 4, 400000);
  opt.max_panels = opt.initial_panels + 400000;
  auto f = [&](double w) { return weight(w) * window_hat(w - nu_prime, tau) * window_hat(w - nu, tau); };
  auto r = quad::integrate<double>(f, lo, hi, opt);
  if (!r.converged) fail(ErrorKind::QuadratureFailure, "frequency overlap did not converge");
  return {r.value, r.abs_error};
}

/// Glauber overlap in the frequency domain, optionally with the secular
/// indicators 1(|w - nu'| < mu) 1(|w - nu| < mu).
inline KernelValue overlap_kernel_frequency(double nu_prime, double nu, const BathSpec& spec,
                                            std::optional<double> secular_mu = std::nullopt,
                                            double abs_tol = 1e-10) {
  spec.validate();
  double lo = -omega_cutoff(spec);
  double hi = omega_cutoff(spec);
  if (secular_mu) {
    if (!(*secular_mu > 0.0)) fail(ErrorKind::InvalidArgument, "secular_mu must be positive");
    lo = std::max({lo, nu - *secular_mu, nu_prime - *secular_mu});
    hi = std::min({hi, nu + *secular_mu, nu_prime + *secular_mu});
  }
  return overlap_kernel_frequency(nu_prime, nu, spec.tau, [&](double w) { return gamma(w, spec); }, lo, hi,
                                  abs_tol);
}

/// C and K for every ordered pair of a frequency list.
struct KernelTable {
  std::vector<double> freqs;
  std::vector<std::vector<double>> overlap;  ///< C[i][j] = C(freqs[i], freqs[j])
  std::vector<std::vector<double>> lamb;     ///< K[i][j] = K(freqs[i], freqs[j])
  double overlap_abs_tol = 1e-10;
  double lamb_abs_tol = 1e-8;
  double max_estimated_error = 0.0;
};

inline KernelTable build_kernel_table(const std::vector<double>& freqs, const CorrelationTable& c,
                                      bool with_lamb) {
  KernelTable t;
  t.freqs = freqs;
  const std::size_t m = freqs.size();
  t.overlap.assign(m, std::vector<double>(m, 0.0));
  t.lamb.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      auto v = overlap_kernel(freqs[i], freqs[j], c, t.overlap_abs_tol);
      t.overlap[i][j] = t.overlap[j][i] = v.value;
      t.max_estimated_error = std::max(t.max_estimated_error, v.abs_error);
    }
  }
  if (with_lamb) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        auto v = lamb_kernel(freqs[i], freqs[j], c, t.lamb_abs_tol);
        t.lamb[i][j] = v.value;
        t.max_estimated_error = std::max(t.max_estimated_error, v.abs_error);
      }
    }
  }
  return t;
}

}  // namespace thermoscape
