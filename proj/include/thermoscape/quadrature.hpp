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

// Globally adaptive Gauss-Kronrod (10/21 point) integration in the style of
// QUADPACK's QAG: the panel with the largest error estimate is bisected until
// the summed estimate meets max(abs_tol, rel_tol * |I|).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <vector>

#include "thermoscape/error.hpp"

namespace thermoscape::quad {

namespace detail {

// Kronrod abscissae (positive half, descending) and weights for the 21-point
// rule; every second abscissa belongs to the embedded 10-point Gauss rule.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525959350, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <typename T>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename T, typename F>
Panel<T> gk21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[10];
  T gauss{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kWgk[static_cast<std::size_t>(j)];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[static_cast<std::size_t>(j / 2)];
  }
  Panel<T> p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.error = magnitude((kronrod - gauss) * half);
  return p;
}

}  // namespace detail

template <typename T>
struct Result {
  T value{};
  double abs_error = 0.0;
  int panels = 0;
  bool converged = false;
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_panels = 200000;
  /// Initial uniform split; useful for long oscillatory ranges.
  int initial_panels = 1;
};

/// Integrates f over [a, b]. T is double or std::complex<double>.
template <typename T, typename F>
Result<T> integrate(F&& f, double a, double b, const Options& opt = {}) {
  Result<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Panel<T>> heap;
  T total{};
  double err = 0.0;
  const int n0 = std::max(1, opt.initial_panels);
  for (int k = 0; k < n0; ++k) {
    const double lo = a + (b - a) * k / n0;
    const double hi = (k + 1 == n0) ? b : a + (b - a) * (k + 1) / n0;
    auto p = detail::gk21<T>(f, lo, hi);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int panels = n0;
  auto done = [&] {
    return err <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
  };
  while (!done() && panels < opt.max_panels) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    auto left = detail::gk21<T>(f, worst.a, mid);
    auto right = detail::gk21<T>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.abs_error = esum;
  out.panels = panels;
  out.converged = esum <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(sum));
  return out;
}

/// Like integrate() but raises QuadratureFailure when the tolerance is missed.
template <typename T, typename F>
T integrate_or_throw(F&& f, double a, double b, const Options& opt, const char* what) {
  auto r = integrate<T>(std::forward<F>(f), a, b, opt);
  if (!r.converged) {
    fail(ErrorKind::QuadratureFailure, std::string(what) + ": estimated error " +
                                           std::to_string(r.abs_error) + " exceeds tolerance " +
                                           std::to_string(opt.abs_tol));
  }
  return r.value;
}

}  // namespace thermoscape::quad
