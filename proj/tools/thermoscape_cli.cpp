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

// thermoscape <scenario> --config FILE [--seed N] [--output PATH]

#include <iostream>

#include <CLI11.hpp>

#include "thermoscape/scenario.hpp"

int main(int argc, char** argv) {
  using namespace thermoscape;
  CLI::App app{"Thermal energy landscapes of local Hamiltonians"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string output;
  std::string chosen;
  for (const auto& name : scenario_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->add_option("--config,-c", config_path, "scenario config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--output,-o", output, "override the result path");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_json("UsageError", "", e.what()).dump() << '\n';
    return kExitConfig;
  }

  Overrides ov;
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed") > 0) ov.seed = seed;
    if (sub->count("--output") > 0) ov.output = output;
  }
  return run_scenario_file(chosen, config_path, ov, std::cerr);
}
