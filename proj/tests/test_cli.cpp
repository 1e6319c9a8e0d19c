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

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "thermoscape/scenario.hpp"

using namespace thermoscape;
namespace fs = std::filesystem;

namespace {

class ScenarioFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("thermoscape_cli_" + std::string(
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& name, Json j) {
    if (!j.contains("output")) j["output"] = {{"result", (dir_ / (name + ".out.json")).string()}};
    const auto path = dir_ / (name + ".json");
    std::ofstream(path) << j.dump();
    return path.string();
  }
  std::string result_path(const std::string& name) const { return (dir_ / (name + ".out.json")).string(); }

  int run(const std::string& scenario, const std::string& config, const Overrides& ov = {}) {
    err_.str("");
    return run_scenario_file(scenario, config, ov, err_);
  }
  Json error() const { return Json::parse(err_.str()); }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream err_;
};

// H = (I - Z)/2, ground |0>, excited |1>.
Json qubit_config(const std::string& scenario) {
  return {{"schema_version", 1},
          {"scenario", scenario},
          {"hamiltonian",
           {{"n", 1},
            {"terms", {{{"pauli", "I"}, {"coeff", 0.5}, {"sites", {0}}},
                       {{"pauli", "Z"}, {"coeff", -0.5}, {"sites", {0}}}}}}},
          {"bath", {{"beta", 10.0}, {"lambda0", 1.0}, {"davies", true}}},
          {"jumps", {{"preset", "pauli_x_all"}}},
          {"state", {{"basis", "1"}}},
          {"epsilon", 1e-3}};
}

Json identity_circuit() {
  Json gate = {{"name", "I"}, {"sites", {0}}};
  return {{"n", 1}, {"t0", 1}, {"gates", {gate, gate, gate}}};
}

}  // namespace

TEST_F(ScenarioFiles, CertifyQubitWitness) {
  ASSERT_EQ(run("certify", write_config("c", qubit_config("certify"))), kExitOk) << err_.str();
  const Json out = Json::parse(slurp(result_path("c")));
  EXPECT_EQ(out["result"]["certificate"]["kind"], "not_local_min_necessary_violated");
  EXPECT_EQ(out["result"]["certificate"]["witness"], "X0");
  EXPECT_NEAR(out["result"]["gradient"]["g"][0].get<double>(), -gamma(-1.0, 10.0, 1.0), 1e-12);
  // Resolved defaults are echoed.
  EXPECT_EQ(out["config_echo"]["bath"]["beta_cap"], kDefaultBetaCap);
  EXPECT_EQ(out["config_echo"]["seed"], 0);
}

TEST_F(ScenarioFiles, ClockhamIdentitySpectrum) {
  Json cfg = {{"schema_version", 1},
              {"scenario", "clockham"},
              {"hamiltonian", {{"circuit", identity_circuit()}, {"J_in", 0.01}, {"J_prop", 0.25}}}};
  ASSERT_EQ(run("clockham", write_config("h", cfg)), kExitOk) << err_.str();
  const Json r = Json::parse(slurp(result_path("h")))["result"];
  const auto spec = r["effective_block_spectrum"].get<std::vector<double>>();
  ASSERT_EQ(spec.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(spec[static_cast<std::size_t>(k)], 0.25 * k, 1e-9);
  EXPECT_NEAR(r["ground_energy"].get<double>(), 0.0, 1e-9);
}

TEST_F(ScenarioFiles, CircuitFileRelativeToConfig) {
  std::ofstream(dir_ / "id.json") << identity_circuit().dump();
  Json cfg = {{"schema_version", 1},
              {"scenario", "clockham"},
              {"hamiltonian", {{"circuit", "id.json"}, {"J_in", 0.01}, {"J_prop", 0.1}}}};
  EXPECT_EQ(run("clockham", write_config("f", cfg)), kExitOk) << err_.str();
  cfg["hamiltonian"]["circuit"] = "missing.json";
  EXPECT_EQ(run("clockham", write_config("g", cfg)), kExitConfig);
  EXPECT_EQ(error()["error"], "hamiltonian.circuit");
}

TEST_F(ScenarioFiles, NegativeBetaIsConfigError) {
  Json cfg = qubit_config("certify");
  cfg["bath"]["beta"] = -1.0;
  EXPECT_EQ(run("certify", write_config("b", cfg)), kExitConfig);
  EXPECT_EQ(error()["error"], "bath.beta");
  EXPECT_EQ(error()["kind"], "ConfigError");
  EXPECT_FALSE(fs::exists(result_path("b")));
}

TEST_F(ScenarioFiles, ValidationFieldNames) {
  struct Case {
    std::function<void(Json&)> edit;
    std::string field;
  };
  const std::vector<Case> cases{
      {[](Json& j) { j["bath"].erase("beta"); }, "bath.beta"},
      {[](Json& j) { j["bath"]["lambda0"] = 0.0; }, "bath.lambda0"},
      {[](Json& j) { j["bath"]["davies"] = false; }, "bath.tau"},
      {[](Json& j) { j["schema_version"] = 2; }, "schema_version"},
      {[](Json& j) { j["scenario"] = "descend"; }, "scenario"},
      {[](Json& j) { j["hamiltonian"]["ising"] = {{"n", 2}}; }, "hamiltonian.terms"},
      {[](Json& j) { j["hamiltonian"]["terms"][1]["sites"] = {3}; }, "hamiltonian.terms[1].sites"},
      {[](Json& j) { j["hamiltonian"]["terms"][0]["pauli"] = "Q"; }, "hamiltonian.terms[0].pauli"},
      {[](Json& j) { j["state"] = {{"basis", "10"}}; }, "state.basis"},
      {[](Json& j) { j["jumps"] = {{"preset", "everything"}}; }, "jumps.preset"},
      {[](Json& j) { j["jumps"] = {{"preset", "pauli_xz_clock_plus_flip"}}; }, "jumps.preset"},
      {[](Json& j) { j.erase("epsilon"); }, "epsilon"},
      {[](Json& j) { j.erase("output"); j["output"] = Json::object(); }, "output.result"},
  };
  for (std::size_t k = 0; k < cases.size(); ++k) {
    Json cfg = qubit_config("certify");
    cases[k].edit(cfg);
    EXPECT_EQ(run("certify", write_config("v" + std::to_string(k), cfg)), kExitConfig) << k;
    EXPECT_EQ(error()["error"], cases[k].field) << k << " " << err_.str();
  }
}

TEST_F(ScenarioFiles, ExplicitJumpList) {
  Json cfg = qubit_config("grad");
  cfg["jumps"] = {{{"label", "flip"}, {"pauli", "X"}, {"sites", {0}}},
                  {{"label", "phase"}, {"pauli", "Z"}, {"sites", {0}}}};
  ASSERT_EQ(run("grad", write_config("j", cfg)), kExitOk) << err_.str();
  const Json g = Json::parse(slurp(result_path("j")))["result"]["gradient"];
  EXPECT_EQ(g["labels"], Json({"flip", "phase"}));
  EXPECT_NEAR(g["g"][1].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(g["l1_norm"].get<double>(), std::abs(g["g"][0].get<double>()), 1e-15);
}

TEST_F(ScenarioFiles, DescendTraceSchema) {
  Json cfg = qubit_config("descend");
  cfg["descent"] = {{"epsilon", 0.05}};
  cfg["output"] = {{"result", result_path("d")}, {"csv", (dir_ / "d.csv").string()}};
  ASSERT_EQ(run("descend", write_config("d", cfg)), kExitOk) << err_.str();
  const Json out = Json::parse(slurp(result_path("d")));
  EXPECT_EQ(validate_trace_json(out), "");
  ASSERT_FALSE(out["steps"].empty());
  double prev = 1.0;
  for (const auto& s : out["steps"]) {
    EXPECT_EQ(s["a"], "X0");
    EXPECT_LT(s["e_after"].get<double>(), prev);
    prev = s["e_after"].get<double>();
  }
  EXPECT_EQ(out["terminal"]["certificate"]["kind"], "local_min_sufficient");
  EXPECT_EQ(out["config_echo"]["descent"]["max_steps"], static_cast<std::int64_t>(std::ceil(42.0 / 0.0025)));
  // CSV: header plus one row per step.
  std::istringstream csv(slurp((dir_ / "d.csv").string()));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "i,a,g,s,e_before,e_after");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, out["steps"].size());
}

TEST_F(ScenarioFiles, GroundStartHasEmptyTrace) {
  Json cfg = qubit_config("descend");
  cfg["state"] = {{"ground", true}};
  cfg["descent"] = {{"epsilon", 1e-3}};
  ASSERT_EQ(run("descend", write_config("g", cfg)), kExitOk) << err_.str();
  const Json out = Json::parse(slurp(result_path("g")));
  EXPECT_TRUE(out["steps"].empty());
  EXPECT_NEAR(out["terminal"]["ground_overlap"].get<double>(), 1.0, 1e-12);
}

TEST_F(ScenarioFiles, MaxStepsWritesPartialTrace) {
  Json cfg = qubit_config("descend");
  cfg["descent"] = {{"epsilon", 1e-3}, {"max_steps", 3}};
  EXPECT_EQ(run("descend", write_config("m", cfg)), kExitFailure);
  EXPECT_EQ(error()["kind"], "MaxStepsExceeded");
  const Json out = Json::parse(slurp(result_path("m")));
  EXPECT_EQ(out["steps"].size(), 3u);
  EXPECT_TRUE(out["terminal"]["certificate"].is_null());
}

TEST_F(ScenarioFiles, StochasticScenariosNeedSeed) {
  Json cfg = qubit_config("descend");
  cfg["descent"] = {{"epsilon", 0.05}, {"noisy", true}};
  const std::string path = write_config("s", cfg);
  EXPECT_EQ(run("descend", path), kExitConfig);
  EXPECT_EQ(error()["error"], "seed");
  Overrides ov;
  ov.seed = 5;
  EXPECT_EQ(run("descend", path, ov), kExitOk) << err_.str();
  EXPECT_EQ(Json::parse(slurp(result_path("s")))["config_echo"]["seed"], 5);
}

TEST_F(ScenarioFiles, ByteIdenticalReruns) {
  Json cfg = qubit_config("descend");
  cfg["seed"] = 11;
  cfg["descent"] = {{"epsilon", 0.05}, {"noisy", true}};
  const std::string path = write_config("r", cfg);
  ASSERT_EQ(run("descend", path), kExitOk);
  const std::string first = slurp(result_path("r"));
  ASSERT_EQ(run("descend", path), kExitOk);
  EXPECT_EQ(slurp(result_path("r")), first);
  Overrides ov;
  ov.seed = 12;
  ov.output = (dir_ / "other.json").string();
  ASSERT_EQ(run("descend", path, ov), kExitOk);
  EXPECT_NE(slurp(ov.output.value()), first);
}

TEST_F(ScenarioFiles, PlateauRowsAndSummary) {
  Json cfg = {{"schema_version", 1},
              {"scenario", "plateau"},
              {"seed", 3},
              {"plateau", {{"n", 4}, {"num_samples", 12}}},
              {"output", {{"result", result_path("p")}, {"csv", (dir_ / "p.csv").string()}}}};
  ASSERT_EQ(run("plateau", write_config("p", cfg)), kExitOk) << err_.str();
  const Json r = Json::parse(slurp(result_path("p")))["result"];
  EXPECT_EQ(r["reference"], 0.0);
  EXPECT_DOUBLE_EQ(r["threshold"].get<double>(), std::pow(2.0, -1.0));
  std::istringstream csv(slurp((dir_ / "p.csv").string()));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "sample_index,max_abs_gradient,obs_deviation");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 12);
}

TEST_F(ScenarioFiles, IsingCertifiedStrings) {
  Json cfg = {{"schema_version", 1},
              {"scenario", "ising"},
              {"hamiltonian", {{"ising", {{"n", 4}, {"h", 1.5}, {"periodic", true}}}}},
              {"bath", {{"beta", 6.0}, {"lambda0", 4.0}, {"davies", true}}},
              {"jumps", {{"preset", "pauli_x_all"}}},
              {"epsilon", 1e-4}};
  ASSERT_EQ(run("ising", write_config("i", cfg)), kExitOk) << err_.str();
  EXPECT_EQ(Json::parse(slurp(result_path("i")))["result"]["certified"], Json({"0000", "1111"}));
}

TEST_F(ScenarioFiles, KernelsFiniteTau) {
  Json cfg = qubit_config("kernels");
  cfg["bath"] = {{"beta", 2.0}, {"tau", 20.0}, {"lambda0", 1.0}};
  ASSERT_EQ(run("kernels", write_config("k", cfg)), kExitOk) << err_.str();
  const Json r = Json::parse(slurp(result_path("k")))["result"];
  EXPECT_EQ(r["bohr_frequencies"], Json({-1.0, 0.0, 1.0}));
  EXPECT_LE(r["max_estimated_error"].get<double>(), 1e-8);
  // X has no zero-frequency component, so the table only covers +-1.
  EXPECT_EQ(r["kernel_frequencies"], Json({-1.0, 1.0}));
  EXPECT_DOUBLE_EQ(r["overlap"][0][1].get<double>(), r["overlap"][1][0].get<double>());
}

TEST_F(ScenarioFiles, NgcWithDelta) {
  Json cfg = qubit_config("ngc");
  cfg["ngc"] = {{"epsilon", 1e-3}, {"delta", 0.5}};
  ASSERT_EQ(run("ngc", write_config("n", cfg)), kExitOk) << err_.str();
  const Json r = Json::parse(slurp(result_path("n")))["result"];
  EXPECT_TRUE(r["holds"].get<bool>());
  EXPECT_DOUBLE_EQ(r["r"].get<double>(), 4e-3);
}

TEST_F(ScenarioFiles, UnreadableConfig) {
  EXPECT_EQ(run("grad", (dir_ / "nope.json").string()), kExitConfig);
  EXPECT_EQ(error()["error"], "config");
  std::ofstream(dir_ / "broken.json") << "{\"schema_version\": ";
  EXPECT_EQ(run("grad", (dir_ / "broken.json").string()), kExitConfig);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorKind::QuadratureFailure), kExitNumerical);
  EXPECT_EQ(exit_code_for(ErrorKind::PositivityDefect), kExitNumerical);
  EXPECT_EQ(exit_code_for(ErrorKind::GroupingUnstable), kExitNumerical);
  EXPECT_EQ(exit_code_for(ErrorKind::SizeLimit), kExitConfig);
  EXPECT_EQ(exit_code_for(ErrorKind::MaxStepsExceeded), kExitFailure);
}

TEST(TraceSchema, RejectsBrokenRecords) {
  Json ok = {{"schema_version", 1},
             {"config_echo", Json::object()},
             {"steps", Json::array()},
             {"terminal", {{"energy", 0.0}, {"certificate", nullptr}}}};
  EXPECT_EQ(validate_trace_json(ok), "");
  Json bad = ok;
  bad["steps"].push_back({{"i", 0}, {"a", "X0"}, {"g", -1.0}, {"s", 0.1}, {"e_before", 1.0}, {"e_after", 1.0}});
  EXPECT_NE(validate_trace_json(bad), "");
  bad = ok;
  bad.erase("terminal");
  EXPECT_EQ(validate_trace_json(bad), "terminal");
}
