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

#include <stdexcept>
#include <string>
#include <string_view>

namespace thermoscape {

/** Failure categories raised by the library. */
enum class ErrorKind {
  DimensionMismatch,
  SizeLimit,
  SiteOutOfRange,
  NotHermitian,
  NonRealExpectation,
  InvalidState,
  InvalidArgument,
  GroupingUnstable,
  QuadratureFailure,
  UnknownJump,
  LambHermiticityDefect,
  NegativeTime,
  PositivityDefect,
  NotCommutingHamiltonian,
  TriggerNotMet,
  MaxStepsExceeded,
  NonUnitaryGate,
  IoError,
  ConfigError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::SiteOutOfRange: return "SiteOutOfRange";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NonRealExpectation: return "NonRealExpectation";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GroupingUnstable: return "GroupingUnstable";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::UnknownJump: return "UnknownJump";
    case ErrorKind::LambHermiticityDefect: return "LambHermiticityDefect";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::PositivityDefect: return "PositivityDefect";
    case ErrorKind::NotCommutingHamiltonian: return "NotCommutingHamiltonian";
    case ErrorKind::TriggerNotMet: return "TriggerNotMet";
    case ErrorKind::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorKind::NonUnitaryGate: return "NonUnitaryGate";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Numerical guards: the CLI maps these to exit code 3.
inline bool is_numerical_guard(ErrorKind kind) {
  return kind == ErrorKind::QuadratureFailure || kind == ErrorKind::PositivityDefect ||
         kind == ErrorKind::GroupingUnstable || kind == ErrorKind::LambHermiticityDefect;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace thermoscape
