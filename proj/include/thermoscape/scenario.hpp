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
 * Scenario configs (JSON, schema_version 1) and their result records.
 *
 * A config names one scenario and carries exactly one Hamiltonian source:
 *   "hamiltonian": {"n": 2, "terms": [{"pauli": "ZZ", "coeff": -1, "sites": [0, 1]}]}
 *   "hamiltonian": {"ising": {"n": 4, "h": 1.5, "periodic": true}}
 *   "hamiltonian": {"circuit": "file.json" | {...}, "J_in": 0.1, "J_prop": 0.2}
 * Results are written with sorted keys; every resolved default is echoed.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermoscape/circuit_io.hpp"
#include "thermoscape/descent.hpp"
#include "thermoscape/gradient.hpp"
#include "thermoscape/landscape_unitary.hpp"

namespace thermoscape {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"grad",     "certify", "ngc",     "descend",
                                              "ising",    "clockham", "plateau", "kernels"};
  return names;
}

// ---------------------------------------------------------------------------
// Field access with key paths in error messages

class JsonReader {
 public:
  JsonReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigFieldError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_[key].is_null(); }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const Json& raw(const std::string& key) const {
    if (!has(key)) throw ConfigFieldError(field(key), "required");
    return obj_[key];
  }
  JsonReader child(const std::string& key) const { return JsonReader(raw(key), field(key)); }

  double number(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigFieldError(field(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigFieldError(field(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  double positive(const std::string& key) const {
    const double x = number(key);
    if (!(x > 0.0)) throw ConfigFieldError(field(key), "must be > 0");
    return x;
  }
  double positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }
  double nonnegative(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const double x = number(key);
    if (x < 0.0) throw ConfigFieldError(field(key), "must be >= 0");
    return x;
  }
  std::int64_t integer(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigFieldError(field(key), "expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::int64_t v = integer(key);
    if (v < 0) throw ConfigFieldError(field(key), "must be >= 0");
    return static_cast<std::uint64_t>(v);
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = obj_[key];
    if (!v.is_boolean()) throw ConfigFieldError(field(key), "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigFieldError(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::vector<int> sites(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_array()) throw ConfigFieldError(field(key), "expected an array of integers");
    std::vector<int> out;
    for (const auto& s : v) {
      if (!s.is_number_integer()) throw ConfigFieldError(field(key), "expected an array of integers");
      out.push_back(s.get<int>());
    }
    return out;
  }

 private:
  const Json& obj_;
  std::string path_;
};

// ---------------------------------------------------------------------------
// Parsed configuration

struct HamiltonianSource {
  LocalHamiltonian h;
  std::optional<CircuitSpec> circuit;
  double J_in = 0.0;
  double J_prop = 0.0;
  Json echo;
};

struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string result_path;
  std::optional<std::string> csv_path;
  std::filesystem::path base_dir;
  Json raw;
  Json echo;  ///< resolved config, every default filled in
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
};

/// {"pauli": "XZ", "coeff": c, "sites": [...]} or {"matrix": [[[re, im], ...]], "sites": [...]}.
inline LocalTerm local_term_from_json(const JsonReader& r) {
  const auto sites = r.sites("sites");
  if (r.has("pauli") == r.has("matrix")) throw ConfigFieldError(r.field("pauli"), "give exactly one of pauli, matrix");
  Matrix op;
  if (r.has("pauli")) {
    const std::string letters = r.string("pauli");
    if (letters.size() != sites.size()) throw ConfigFieldError(r.field("pauli"), "length differs from sites");
    for (char ch : letters) {
      if (std::string("IXYZ").find(ch) == std::string::npos) throw ConfigFieldError(r.field("pauli"), "letters must be I, X, Y, Z");
    }
    op = pauli_matrix({r.number("coeff", 1.0), letters}, static_cast<int>(letters.size()));
  } else {
    op = r.number("coeff", 1.0) * matrix_from_json(r.raw("matrix"), r.field("matrix"));
    if (op.rows() != (Eigen::Index{1} << sites.size())) throw ConfigFieldError(r.field("matrix"), "size differs from sites");
  }
  return LocalTerm{op, sites};
}

inline HamiltonianSource hamiltonian_from_json(const JsonReader& r, const std::filesystem::path& base_dir) {
  const int sources = (r.has("terms") ? 1 : 0) + (r.has("ising") ? 1 : 0) + (r.has("circuit") ? 1 : 0);
  if (sources != 1) throw ConfigFieldError(r.field("terms"), "give exactly one of terms, ising, circuit");
  HamiltonianSource src;
  if (r.has("terms")) {
    const auto n = r.integer("n");
    if (n < 1 || n > kMaxQubits) throw ConfigFieldError(r.field("n"), "must be in [1, 14]");
    const Json& terms = r.raw("terms");
    if (!terms.is_array() || terms.empty()) throw ConfigFieldError(r.field("terms"), "expected a non-empty array");
    std::vector<LocalTerm> list;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      JsonReader t(terms[k], r.field("terms") + "[" + std::to_string(k) + "]");
      LocalTerm term = local_term_from_json(t);
      for (int s : term.sites) {
        if (s < 0 || s >= n) throw ConfigFieldError(t.field("sites"), "site out of range");
      }
      if (!is_hermitian(term.op)) throw ConfigFieldError(t.field("pauli"), "term is not Hermitian");
      list.push_back(std::move(term));
    }
    src.h = assemble(std::move(list), static_cast<int>(n));
    src.echo = {{"n", n}, {"terms", terms}};
  } else if (r.has("ising")) {
    JsonReader is = r.child("ising");
    const auto n = is.integer("n");
    if (n < 2 || n > kMaxQubits) throw ConfigFieldError(is.field("n"), "must be in [2, 14]");
    const double h = is.number("h", 0.0);
    const double j = is.number("J", 1.0);
    const bool periodic = is.boolean("periodic", true);
    src.h = build_ising_chain(static_cast<int>(n), h, periodic, j);
    src.echo = {{"ising", {{"n", n}, {"h", h}, {"J", j}, {"periodic", periodic}}}};
  } else {
    const Json& c = r.raw("circuit");
    Json circuit_json;
    if (c.is_string()) {
      std::filesystem::path p = c.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) throw ConfigFieldError(r.field("circuit"), "cannot open '" + p.string() + "'");
      try {
        in >> circuit_json;
      } catch (const Json::parse_error& e) {
        throw ConfigFieldError(r.field("circuit"), e.what());
      }
    } else {
      circuit_json = c;
    }
    src.circuit = circuit_from_json(circuit_json, r.field("circuit"));
    src.J_in = r.positive("J_in");
    src.J_prop = r.positive("J_prop");
    if (src.circuit->n + src.circuit->T() > kMaxQubits) throw ConfigFieldError(r.field("circuit"), "n + T exceeds 14");
    src.h = build_clock_hamiltonian(*src.circuit, src.J_in, src.J_prop).full;
    src.echo = {{"circuit", circuit_json}, {"J_in", src.J_in}, {"J_prop", src.J_prop}};
  }
  return src;
}

struct BathSettings {
  LindbladConfig cfg;
  Json echo;
};

inline BathSettings bath_from_json(const JsonReader& r) {
  BathSettings b;
  auto& c = b.cfg;
  c.davies = r.boolean("davies", false);
  c.zero_temperature = r.boolean("zero_temperature", false);
  c.beta_cap = r.positive("beta_cap", kDefaultBetaCap);
  c.bath.lambda0 = r.positive("lambda0", 1.0);
  if (c.zero_temperature) {
    if (!c.davies) throw ConfigFieldError(r.field("zero_temperature"), "requires davies");
    c.bath.beta = c.beta_cap;
  } else {
    c.bath.beta = r.number("beta");
    if (c.bath.beta < 0.0) throw ConfigFieldError(r.field("beta"), "must be >= 0");
  }
  if (c.davies) {
    c.bath.tau = std::numeric_limits<double>::infinity();
  } else {
    c.bath.tau = r.positive("tau");
  }
  c.include_lamb_shift = r.boolean("include_lamb_shift", true);
  if (r.has("secular_mu")) {
    if (c.davies) throw ConfigFieldError(r.field("secular_mu"), "needs finite tau");
    c.secular_mu = r.positive("secular_mu");
  }
  b.echo = {{"beta", c.zero_temperature ? Json(nullptr) : Json(c.bath.beta)},
            {"tau", c.davies ? Json(nullptr) : Json(c.bath.tau)},
            {"lambda0", c.bath.lambda0},
            {"davies", c.davies},
            {"zero_temperature", c.zero_temperature},
            {"beta_cap", c.beta_cap},
            {"include_lamb_shift", c.include_lamb_shift},
            {"secular_mu", c.secular_mu ? Json(*c.secular_mu) : Json(nullptr)}};
  return b;
}

inline std::vector<LabeledJump> jumps_from_json(const JsonReader& root, const HamiltonianSource& src, Json& echo) {
  const int n = src.h.n;
  if (!root.has("jumps")) throw ConfigFieldError("jumps", "required");
  const Json& j = root.raw("jumps");
  if (j.is_object()) {
    JsonReader r(j, "jumps");
    const std::string preset = r.string("preset");
    echo = {{"preset", preset}};
    if (preset == "pauli_x_all") return pauli_x_jumps(n);
    if (preset == "pauli_xz_clock_plus_flip") {
      if (!src.circuit) throw ConfigFieldError("jumps.preset", "pauli_xz_clock_plus_flip needs a circuit Hamiltonian");
      return clock_jump_preset(*src.circuit);
    }
    throw ConfigFieldError("jumps.preset", "unknown preset '" + preset + "'");
  }
  if (!j.is_array() || j.empty()) throw ConfigFieldError("jumps", "expected a preset object or a non-empty list");
  std::vector<LabeledJump> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    JsonReader r(j[k], "jumps[" + std::to_string(k) + "]");
    const std::string label = r.string("label");
    LocalTerm t = local_term_from_json(r);
    for (int s : t.sites) {
      if (s < 0 || s >= n) throw ConfigFieldError(r.field("sites"), "site out of range");
    }
    out.push_back({label, kron_embed(t.op, t.sites, n)});
  }
  echo = j;
  return out;
}

/// {"basis": "0101"} | {"maximally_mixed": true} | {"ground": true}.
inline DensityMatrix state_from_json(const JsonReader& r, const LocalHamiltonian& h, Json& echo) {
  const Eigen::Index dim = h.dim();
  if (r.has("basis")) {
    const std::string bits = r.string("basis");
    if (static_cast<int>(bits.size()) != h.n || bits.find_first_not_of("01") != std::string::npos) {
      throw ConfigFieldError(r.field("basis"), "expected a bitstring of length " + std::to_string(h.n));
    }
    echo = {{"basis", bits}};
    return DensityMatrix::basis_state(dim, bitstring_index(bits));
  }
  if (r.boolean("maximally_mixed", false)) {
    echo = {{"maximally_mixed", true}};
    return DensityMatrix::maximally_mixed(dim);
  }
  if (r.boolean("ground", false)) {
    echo = {{"ground", true}};
    const auto sd = spectral_data(h.dense);
    return DensityMatrix::from_matrix(sd.projectors[0] / static_cast<double>(sd.group_size[0]));
  }
  throw ConfigFieldError(r.field("basis"), "state needs one of basis, maximally_mixed, ground");
}

inline ScenarioConfig parse_config(const Json& raw, const std::string& expected_scenario,
                                   const std::filesystem::path& base_dir, const Overrides& ov) {
  JsonReader r(raw, "");
  if (r.integer("schema_version") != kSchemaVersion) throw ConfigFieldError("schema_version", "must be 1");
  ScenarioConfig cfg;
  cfg.scenario = r.has("scenario") ? r.string("scenario") : expected_scenario;
  if (std::find(scenario_names().begin(), scenario_names().end(), cfg.scenario) == scenario_names().end()) {
    throw ConfigFieldError("scenario", "unknown scenario '" + cfg.scenario + "'");
  }
  if (!expected_scenario.empty() && cfg.scenario != expected_scenario) {
    throw ConfigFieldError("scenario", "config is for '" + cfg.scenario + "', not '" + expected_scenario + "'");
  }
  cfg.seed = ov.seed.value_or(r.unsigned_integer("seed", 0));
  const bool stochastic = cfg.scenario == "plateau" ||
                          (cfg.scenario == "descend" && r.has("descent") && r.child("descent").boolean("noisy", false));
  if (stochastic && !r.has("seed") && !ov.seed) throw ConfigFieldError("seed", "required for stochastic scenarios");
  JsonReader out = r.child("output");
  cfg.result_path = ov.output.value_or(out.string("result"));
  if (out.has("csv")) cfg.csv_path = out.string("csv");
  cfg.base_dir = base_dir;
  cfg.raw = raw;
  return cfg;
}

// ---------------------------------------------------------------------------
// Scenarios

struct ScenarioOutput {
  Json result;
  std::optional<std::string> csv;
};

inline Json certificate_json(const CertificateResult& c) {
  return {{"kind", to_string(c.kind)},
          {"epsilon", c.epsilon},
          {"inf_norm_minus", c.inf_norm_minus},
          {"witness", c.witness ? Json(*c.witness) : Json(nullptr)}};
}

inline Json gradient_json(const GradientReport& g) {
  return {{"labels", g.labels},         {"g", g.g},
          {"grad_minus", g.grad_minus}, {"inf_norm_minus", g.inf_norm_minus},
          {"l1_norm_minus", g.l1_norm_minus}, {"inf_norm", g.inf_norm},
          {"l1_norm", g.l1_norm}};
}

inline Json step_json(const DescentStep& s) {
  return {{"i", s.index}, {"a", s.label}, {"g", s.g}, {"s", s.s}, {"e_before", s.energy_before},
          {"e_after", s.energy_after}};
}

/// Checks the descent record layout; returns an empty string when valid.
inline std::string validate_trace_json(const Json& j) {
  if (!j.is_object()) return "record is not an object";
  if (j.value("schema_version", 0) != kSchemaVersion) return "schema_version";
  if (!j.contains("config_echo") || !j["config_echo"].is_object()) return "config_echo";
  if (!j.contains("steps") || !j["steps"].is_array()) return "steps";
  for (const auto& s : j["steps"]) {
    for (const char* k : {"i", "a", "g", "s", "e_before", "e_after"}) {
      if (!s.contains(k)) return std::string("steps[].") + k;
    }
    if (!(s["e_after"].get<double>() < s["e_before"].get<double>())) return "steps[].e_after not decreasing";
  }
  if (!j.contains("terminal") || !j["terminal"].is_object()) return "terminal";
  const auto& t = j["terminal"];
  if (!t.contains("energy") || !t["energy"].is_number()) return "terminal.energy";
  if (!t.contains("certificate")) return "terminal.certificate";
  return "";
}

class ScenarioRunner {
 public:
  explicit ScenarioRunner(ScenarioConfig cfg) : cfg_(std::move(cfg)), root_(cfg_.raw, "") {}

  ScenarioOutput run() {
    cfg_.echo = {{"schema_version", kSchemaVersion}, {"scenario", cfg_.scenario}, {"seed", cfg_.seed}};
    ScenarioOutput out;
    const std::string& s = cfg_.scenario;
    if (s == "grad" || s == "certify") {
      out = run_gradient(s == "certify");
    } else if (s == "ngc") {
      out = run_ngc();
    } else if (s == "descend") {
      out = run_descend();
    } else if (s == "ising") {
      out = run_ising();
    } else if (s == "clockham") {
      out = run_clockham();
    } else if (s == "plateau") {
      out = run_plateau();
    } else {
      out = run_kernels();
    }
    Json outputs = {{"result", cfg_.result_path}};
    if (cfg_.csv_path) outputs["csv"] = *cfg_.csv_path;
    cfg_.echo["output"] = outputs;
    out.result["config_echo"] = cfg_.echo;
    out.result["schema_version"] = kSchemaVersion;
    if (s != "descend") out.result["scenario"] = s;
    return out;
  }

  const ScenarioConfig& config() const { return cfg_; }

 private:
  HamiltonianSource load_hamiltonian() {
    auto src = hamiltonian_from_json(root_.child("hamiltonian"), cfg_.base_dir);
    cfg_.echo["hamiltonian"] = src.echo;
    return src;
  }

  LindbladModel load_model(const HamiltonianSource& src) {
    auto bath = bath_from_json(root_.child("bath"));
    cfg_.echo["bath"] = bath.echo;
    Json jumps_echo;
    auto jumps = jumps_from_json(root_, src, jumps_echo);
    cfg_.echo["jumps"] = jumps_echo;
    return LindbladModel(src.h, std::move(jumps), bath.cfg);
  }

  DensityMatrix load_state(const LocalHamiltonian& h) {
    Json echo;
    auto rho = state_from_json(root_.child("state"), h, echo);
    cfg_.echo["state"] = echo;
    return rho;
  }

  double load_epsilon() {
    const double eps = root_.positive("epsilon");
    cfg_.echo["epsilon"] = eps;
    return eps;
  }

  ScenarioOutput run_gradient(bool certify_too) {
    auto src = load_hamiltonian();
    auto model = load_model(src);
    auto rho = load_state(src.h);
    auto report = gradient_vector(model, rho);
    Json result = {{"gradient", gradient_json(report)}, {"energy", expectation(src.h.dense, rho)}};
    if (certify_too) result["certificate"] = certificate_json(certify(report, load_epsilon()));
    std::ostringstream csv;
    csv << "label,g,grad_minus\n";
    for (std::size_t a = 0; a < report.g.size(); ++a) {
      csv << report.labels[a] << ',' << fmt(report.g[a]) << ',' << fmt(report.grad_minus[a]) << '\n';
    }
    return {{{"result", result}}, csv.str()};
  }

  ScenarioOutput run_ngc() {
    auto src = load_hamiltonian();
    auto model = load_model(src);
    JsonReader r = root_.child("ngc");
    const double eps = r.nonnegative("epsilon", 0.0);
    double rr = 0.0;
    if (r.has("r") == r.has("delta")) throw ConfigFieldError(r.field("r"), "give exactly one of r, delta");
    if (r.has("r")) {
      rr = r.nonnegative("r", 0.0);
    } else {
      rr = ngc_parameters(eps, r.positive("delta")).r;
    }
    WeightVector w = load_weights(model.num_jumps());
    const auto& sd = model.spectral();
    auto res = negative_gradient_condition(model, w, sd.projectors[0], rr, eps);
    cfg_.echo["ngc"] = {{"epsilon", eps}, {"r", rr}, {"delta", r.has("delta") ? Json(r.number("delta")) : Json(nullptr)}};
    Json result = {{"holds", res.holds}, {"min_eigenvalue_slack", res.min_eigenvalue_slack}, {"r", rr},
                   {"epsilon", eps}, {"spectral_gap", sd.spectral_gap}};
    return {{{"result", result}}, std::nullopt};
  }

  WeightVector load_weights(std::size_t m) {
    WeightVector w = WeightVector::uniform(m);
    if (root_.has("weights")) {
      const Json& j = root_.raw("weights");
      if (!j.is_array() || j.size() != m) throw ConfigFieldError("weights", "expected " + std::to_string(m) + " numbers");
      w.alphas.clear();
      double total = 0.0;
      for (const auto& x : j) {
        if (!x.is_number() || x.get<double>() < 0.0) throw ConfigFieldError("weights", "weights must be >= 0");
        w.alphas.push_back(x.get<double>());
        total += x.get<double>();
      }
      if (!(total > 0.0)) throw ConfigFieldError("weights", "weights must not all be zero");
      for (double& a : w.alphas) a /= total;
    }
    cfg_.echo["weights"] = w.alphas;
    return w;
  }

  ScenarioOutput run_descend() {
    auto src = load_hamiltonian();
    auto model = load_model(src);
    auto rho0 = load_state(src.h);
    JsonReader r = root_.child("descent");
    DescentConfig dc;
    dc.epsilon = r.positive("epsilon");
    dc.B = r.positive("B", src.h.norm_bound_B);
    if (dc.B < op_norm(src.h.dense) * (1.0 - 1e-12)) throw ConfigFieldError(r.field("B"), "must be >= ||H||");
    const auto stride = r.integer("trace_stride", 1);
    if (stride < 1) throw ConfigFieldError(r.field("trace_stride"), "must be >= 1");
    if (r.has("max_steps")) {
      const auto ms = r.integer("max_steps");
      if (ms < 1) throw ConfigFieldError(r.field("max_steps"), "must be >= 1");
      dc.max_steps = ms;
    }
    if (r.has("grad_tol")) dc.grad_tol = r.nonnegative("grad_tol", 0.0);
    if (r.has("trigger")) dc.trigger = r.number("trigger");
    dc.noisy_gradients = r.boolean("noisy", false);
    dc.seed = cfg_.seed;
    cfg_.echo["descent"] = {{"epsilon", dc.epsilon},
                            {"B", dc.B},
                            {"max_steps", dc.resolved_max_steps()},
                            {"grad_tol", dc.resolved_grad_tol()},
                            {"trigger", dc.resolved_trigger()},
                            {"noisy", dc.noisy_gradients},
                            {"trace_stride", stride}};
    DescentTrace trace;
    std::optional<DescentLimitError> limit;
    try {
      trace = thermal_gradient_descent(model, rho0, dc);
    } catch (const DescentLimitError& e) {
      limit = e;
      trace = e.trace();
    }
    Json steps = Json::array();
    std::ostringstream csv;
    csv << "i,a,g,s,e_before,e_after\n";
    // Every stride-th step plus the last one are recorded.
    for (const auto& s : trace.steps) {
      if (s.index % stride != 0 && s.index + 1 != static_cast<std::int64_t>(trace.steps.size())) continue;
      steps.push_back(step_json(s));
      csv << s.index << ',' << s.label << ',' << fmt(s.g) << ',' << fmt(s.s) << ',' << fmt(s.energy_before) << ','
          << fmt(s.energy_after) << '\n';
    }
    const Matrix& pg = model.spectral().projectors[0];
    Json terminal = {{"energy", trace.terminal_energy},
                     {"terminated_early", trace.terminated_early},
                     {"num_steps", trace.steps.size()},
                     {"ground_overlap", real_trace_product(pg, trace.terminal_state.mat())},
                     {"certificate", limit ? Json(nullptr) : certificate_json(trace.terminal_certificate)}};
    if (src.circuit) {
      const Vector eta0 = history_state(*src.circuit);
      terminal["history_state_overlap"] = eta0.dot(trace.terminal_state.mat() * eta0).real();
    }
    ScenarioOutput out{{{"steps", steps}, {"terminal", terminal}}, csv.str()};
    if (limit) {
      pending_error_ = limit->what();
      pending_kind_ = limit->kind();
    }
    return out;
  }

  ScenarioOutput run_ising() {
    auto src = load_hamiltonian();
    if (!root_.child("hamiltonian").has("ising")) throw ConfigFieldError("hamiltonian.ising", "ising scenario needs an ising Hamiltonian");
    auto model = load_model(src);
    const double eps = load_epsilon();
    const int n = src.h.n;
    Json states = Json::array();
    Json certified = Json::array();
    std::ostringstream csv;
    csv << "bitstring,energy,inf_norm_minus,certified\n";
    for (std::int64_t x = 0; x < qubit_dim(n); ++x) {
      const std::string bits = index_bitstring(x, n);
      auto rho = DensityMatrix::basis_state(src.h.dim(), x);
      auto c = certify(gradient_vector(model, rho), eps);
      const double e = src.h.dense(x, x).real();
      const bool ok = c.kind == CertificateKind::LocalMinSufficient;
      states.push_back({{"bitstring", bits}, {"energy", e}, {"certificate", certificate_json(c)}});
      if (ok) certified.push_back(bits);
      csv << bits << ',' << fmt(e) << ',' << fmt(c.inf_norm_minus) << ',' << (ok ? 1 : 0) << '\n';
    }
    return {{{"result", {{"states", states}, {"certified", certified}}}}, csv.str()};
  }

  ScenarioOutput run_clockham() {
    auto src = load_hamiltonian();
    if (!src.circuit) throw ConfigFieldError("hamiltonian.circuit", "clockham needs a circuit Hamiltonian");
    const CircuitSpec& cs = *src.circuit;
    auto hc = build_clock_hamiltonian(cs, src.J_in, src.J_prop);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(effective_prop_block(cs, 0, src.J_prop));
    std::vector<double> spectrum(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    const auto xi = xi_weights(cs.T());
    double min_center = 1.0;
    for (int t = cs.t0; t <= cs.T() - cs.t0; ++t) min_center = std::min(min_center, xi[static_cast<std::size_t>(t)]);
    Json reductions = Json::array();
    for (int j = 0; j < cs.n; ++j) {
      auto r = observable_reduction(cs, j);
      reductions.push_back({{"qubit", j}, {"T_j", r.T_j}, {"p_gt", r.p_gt}, {"hoeffding_bound", r.hoeffding_bound},
                            {"exact_eps", r.exact_eps}, {"z_output", r.z_output}});
    }
    Json result = {{"n", cs.n},
                   {"T", cs.T()},
                   {"t0", cs.t0},
                   {"L", cs.L()},
                   {"t_j", cs.first_action_times},
                   {"T_j", cs.last_action_times},
                   {"xi", xi},
                   {"h", std::vector<double>(hc.h.begin() + 1, hc.h.end())},
                   {"g", hc.g},
                   {"effective_block_spectrum", spectrum},
                   {"xi_center", {{"min_center_xi", min_center},
                                  {"bound", xi_center_lower_bound(cs)},
                                  {"bound_c_over_4", xi_center_bound_c_over_4(cs)}}},
                   {"observable_reduction", reductions}};
    const int N = cs.n + cs.T();
    const int diag_limit = static_cast<int>(root_.integer("diagonalize_max_qubits", 10));
    cfg_.echo["diagonalize_max_qubits"] = diag_limit;
    if (N <= diag_limit) {
      auto e = herm_eig(hc.H_C());
      const Vector eta0 = history_state(cs);
      result["ground_energy"] = e.values(0);
      result["first_excited_energy"] = e.values(1);
      result["ground_fidelity"] = std::norm(eta0.dot(e.vectors.col(0)));
    }
    return {{{"result", result}}, std::nullopt};
  }

  ScenarioOutput run_plateau() {
    JsonReader r = root_.child("plateau");
    const auto n = r.integer("n");
    if (n < 2 || n > kMaxQubits) throw ConfigFieldError(r.field("n"), "must be in [2, 14]");
    const auto samples = r.integer("num_samples");
    if (samples < 1) throw ConfigFieldError(r.field("num_samples"), "must be >= 1");
    const std::string model = r.has("hamiltonian") ? r.string("hamiltonian") : "normalized_transverse_ising";
    if (model != "normalized_transverse_ising") throw ConfigFieldError(r.field("hamiltonian"), "unknown model '" + model + "'");
    const int ni = static_cast<int>(n);
    const Matrix h = normalized_transverse_ising(ni);
    const Matrix o = kron_embed(pauli_letter('Z'), {0}, ni);
    const double threshold = std::pow(2.0, -static_cast<double>(n) / 4.0);
    cfg_.echo["plateau"] = {{"n", n}, {"num_samples", samples}, {"hamiltonian", model},
                            {"generators", "single_site_pauli"}, {"observable", "Z0"}, {"threshold", threshold}};
    auto s = plateau_stats(ni, h, o, single_site_pauli_generators(ni), samples, cfg_.seed);
    std::ostringstream csv;
    csv << "sample_index,max_abs_gradient,obs_deviation\n";
    for (const auto& row : s.samples) {
      csv << row.index << ',' << fmt(row.max_abs_gradient) << ',' << fmt(row.obs_deviation) << '\n';
    }
    Json result = {{"reference", s.reference},
                   {"mean_max_gradient", s.mean_max_gradient},
                   {"median_max_gradient", s.median_max_gradient},
                   {"max_max_gradient", s.max_max_gradient},
                   {"mean_obs_deviation", s.mean_obs_deviation},
                   {"max_obs_deviation", s.max_obs_deviation},
                   {"threshold", threshold},
                   {"fraction_within_threshold", s.fraction_within(threshold)}};
    return {{{"result", result}}, csv.str()};
  }

  ScenarioOutput run_kernels() {
    auto src = load_hamiltonian();
    auto model = load_model(src);
    const auto& freqs = model.spectral().bohr_freqs;
    std::ostringstream csv;
    csv << "nu_prime,nu,overlap,lamb\n";
    Json result = {{"bohr_frequencies", freqs}};
    if (const KernelTable* k = model.kernels()) {
      result["overlap"] = k->overlap;
      result["lamb"] = k->lamb;
      result["kernel_frequencies"] = k->freqs;
      result["max_estimated_error"] = k->max_estimated_error;
      for (std::size_t i = 0; i < k->freqs.size(); ++i) {
        for (std::size_t j = 0; j < k->freqs.size(); ++j) {
          csv << fmt(k->freqs[i]) << ',' << fmt(k->freqs[j]) << ',' << fmt(k->overlap[i][j]) << ','
              << fmt(k->lamb.empty() ? 0.0 : k->lamb[i][j]) << '\n';
        }
      }
    } else {
      std::vector<double> weights;
      for (double nu : freqs) {
        weights.push_back(model.davies_weight(nu));
        csv << fmt(nu) << ',' << fmt(nu) << ',' << fmt(weights.back()) << ",0\n";
      }
      result["davies_weights"] = weights;
    }
    return {{{"result", result}}, csv.str()};
  }

 public:
  static std::string fmt(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
  }

  std::optional<std::string> pending_error_;
  ErrorKind pending_kind_ = ErrorKind::InvalidArgument;

 private:
  ScenarioConfig cfg_;
  JsonReader root_;
};

// ---------------------------------------------------------------------------
// Process-level driver

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline bool is_config_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::SiteOutOfRange:
    case ErrorKind::NotHermitian:
    case ErrorKind::NonUnitaryGate:
    case ErrorKind::SizeLimit:
    case ErrorKind::UnknownJump:
    case ErrorKind::NotCommutingHamiltonian:
      return true;
    default:
      return false;
  }
}

inline int exit_code_for(ErrorKind k) {
  if (is_numerical_guard(k)) return kExitNumerical;
  if (is_config_kind(k)) return kExitConfig;
  return kExitFailure;
}

inline void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::IoError, "write failed for '" + path + "'");
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline Json error_json(const std::string& kind, const std::string& field, const std::string& message) {
  return {{"error", field}, {"kind", kind}, {"message", message}};
}

/// Runs one scenario; machine-readable errors go to err.
inline int run_scenario_file(const std::string& scenario, const std::string& config_path, const Overrides& ov,
                             std::ostream& err) {
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigFieldError("config", "cannot open '" + config_path + "'");
    Json raw;
    try {
      in >> raw;
    } catch (const Json::parse_error& e) {
      throw ConfigFieldError("config", e.what());
    }
    const auto base = std::filesystem::path(config_path).parent_path();
    ScenarioRunner runner(parse_config(raw, scenario, base, ov));
    ScenarioOutput out = runner.run();
    write_text(runner.config().result_path, dump_json(out.result));
    if (runner.config().csv_path && out.csv) write_text(*runner.config().csv_path, *out.csv);
    if (runner.pending_error_) {
      err << error_json(std::string(to_string(runner.pending_kind_)), "descent", *runner.pending_error_).dump()
          << '\n';
      return exit_code_for(runner.pending_kind_);
    }
    return kExitOk;
  } catch (const ConfigFieldError& e) {
    err << error_json("ConfigError", e.field(), e.what()).dump() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << error_json(std::string(to_string(e.kind())), "", e.what()).dump() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << error_json("Internal", "", e.what()).dump() << '\n';
    return kExitFailure;
  }
}

}  // namespace thermoscape
