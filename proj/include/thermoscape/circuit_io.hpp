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
 * Circuit files: {"n": int, "t0": int, "gates": [{"name", "sites", "matrix"?}]}.
 * Custom gates carry "matrix" as rows of [re, im] pairs.
 */

#include <algorithm>
#include <fstream>
#include <string>

#include <json.hpp>

#include "thermoscape/circuit_hamiltonian.hpp"

namespace thermoscape {

/// Raised for malformed configuration; field() names the offending key path.
class ConfigFieldError : public Error {
 public:
  ConfigFieldError(std::string field, const std::string& msg)
      : Error(ErrorKind::ConfigError, field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline Matrix matrix_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigFieldError(field, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw ConfigFieldError(field, "matrix must be square");
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ConfigFieldError(field, "entries must be [re, im] pairs");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline CircuitSpec circuit_from_json(const nlohmann::json& j, const std::string& prefix = "circuit") {
  if (!j.is_object()) throw ConfigFieldError(prefix, "expected an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw ConfigFieldError(prefix + ".n", "required integer");
  if (!j.contains("t0") || !j["t0"].is_number_integer()) throw ConfigFieldError(prefix + ".t0", "required integer");
  if (!j.contains("gates") || !j["gates"].is_array()) throw ConfigFieldError(prefix + ".gates", "required array");
  std::vector<Gate> gates;
  for (std::size_t k = 0; k < j["gates"].size(); ++k) {
    const std::string field = prefix + ".gates[" + std::to_string(k) + "]";
    const auto& g = j["gates"][k];
    if (!g.contains("name") || !g["name"].is_string()) throw ConfigFieldError(field + ".name", "required string");
    if (!g.contains("sites") || !g["sites"].is_array()) throw ConfigFieldError(field + ".sites", "required array");
    Gate gate;
    gate.name = g["name"].get<std::string>();
    for (const auto& s : g["sites"]) {
      if (!s.is_number_integer()) throw ConfigFieldError(field + ".sites", "sites must be integers");
      gate.sites.push_back(s.get<int>());
    }
    if (gate.name == "custom") {
      if (!g.contains("matrix")) throw ConfigFieldError(field + ".matrix", "custom gates need a matrix");
      gate.matrix = matrix_from_json(g["matrix"], field + ".matrix");
    } else {
      static const char* known[] = {"I", "X", "Y", "Z", "H", "T", "CNOT"};
      if (std::find(std::begin(known), std::end(known), gate.name) == std::end(known)) {
        throw ConfigFieldError(field + ".name", "unknown gate '" + gate.name + "'");
      }
      if (g.contains("matrix")) throw ConfigFieldError(field + ".matrix", "only custom gates take a matrix");
      gate.matrix = named_gate_matrix(gate.name);
    }
    gates.push_back(std::move(gate));
  }
  return make_circuit(j["n"].get<int>(), j["t0"].get<int>(), std::move(gates));
}

inline CircuitSpec load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open circuit file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigFieldError("circuit", e.what());
  }
  return circuit_from_json(j);
}

}  // namespace thermoscape
