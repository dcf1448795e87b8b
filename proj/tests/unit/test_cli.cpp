// Copyright 2026 The Musielak Galerkin Authors
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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "musielak/cli.hpp"

namespace musielak::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("musielak_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  int run_cmd(const std::string& sub, const std::string& config, const std::string& out = "out") {
    Options o;
    o.subcommand = sub;
    o.config_path = config;
    o.out_dir = (dir_ / out).string();
    o.quiet = true;
    std::ostringstream so;
    err_.str("");
    return run(o, so, err_);
  }

  static std::string shipped(const std::string& name) { return std::string(MUSIELAK_CONFIG_DIR) + "/" + name; }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream err_;
};

TEST_F(CliTest, ConstantPowerNFunctionPasses) {
  EXPECT_EQ(run_cmd("check-nfunction", shipped("constant_power_p2.json")), kPass);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "fenchel_young.csv"));
}

TEST_F(CliTest, ViolatingDoublePhaseBalanceWritesWitnesses) {
  EXPECT_EQ(run_cmd("check-balance", shipped("balance_double_phase_violating.json")), kViolation);
  const auto csv = slurp(dir_ / "out" / "balance_witnesses.csv");
  EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 1);
}

TEST_F(CliTest, NegativeBIsAViolation) {
  EXPECT_EQ(run_cmd("validate-problem", shipped("validate_broken_b.json")), kViolation);
}

TEST_F(CliTest, ExhaustedSolverBudgetExitsThree) {
  const auto cfg = write("nc.json", R"({
    "fem": { "domain": { "kind": "rectangle", "lower": [0, 0], "upper": [1, 1] }, "resolution": 4 },
    "nfunction": { "family": "constant-power", "p": 3, "normalized": true },
    "problem": { "operator": { "kind": "p-laplacian", "p": 3 },
                 "f": { "kind": "terms", "terms": [ { "component": 0, "coefficient": 1,
                        "factors": [ { "kind": "power", "param": 1 } ] } ] } },
    "galerkin": { "max_iterations": 1, "fallback_iterations": 1, "residual_tol": 1e-300 }
  })");
  EXPECT_EQ(run_cmd("solve", cfg), kNotConverged);
}

TEST_F(CliTest, MalformedJsonReportsLineAndColumn) {
  const auto cfg = write("bad.json", "{\n  \"cli\": {\n    \"seed\": 1,,\n  }\n}\n");
  EXPECT_EQ(run_cmd("solve", cfg), kConfigError);
  EXPECT_NE(err_.str().find("bad.json:3:"), std::string::npos) << err_.str();
}

TEST_F(CliTest, UnknownKeyIsNamed) {
  const auto cfg = write("typo.json", R"({ "nfunction": { "family": "constant-power", "p": 2, "pp": 2 } })");
  EXPECT_EQ(run_cmd("check-nfunction", cfg), kConfigError);
  EXPECT_NE(err_.str().find("nfunction.pp"), std::string::npos) << err_.str();
}

TEST_F(CliTest, WrongTypeIsNamed) {
  const auto cfg = write("type.json", R"({ "fem": { "resolution": "many" } })");
  EXPECT_EQ(run_cmd("solve", cfg), kConfigError);
  EXPECT_NE(err_.str().find("fem.resolution"), std::string::npos) << err_.str();
}

TEST_F(CliTest, CustomOperatorIsRejected) {
  const auto cfg = write("custom.json", R"({ "problem": { "operator": { "kind": "custom" } } })");
  EXPECT_EQ(run_cmd("validate-problem", cfg), kConfigError);
}

TEST_F(CliTest, InvalidNFunctionParameterIsAConfigError) {
  const auto cfg = write("p.json", R"({ "nfunction": { "family": "constant-power", "p": 1 } })");
  EXPECT_EQ(run_cmd("check-nfunction", cfg), kConfigError);
}

TEST_F(CliTest, MissingFileAndUnknownSubcommand) {
  EXPECT_EQ(run_cmd("solve", (dir_ / "absent.json").string()), kConfigError);
  EXPECT_EQ(run_cmd("frobnicate", shipped("constant_power_p2.json")), kConfigError);
}

TEST_F(CliTest, ConvergeIsByteIdenticalAcrossRuns) {
  ASSERT_EQ(run_cmd("converge", shipped("converge_1d_p2.json"), "a"), kPass);
  ASSERT_EQ(run_cmd("converge", shipped("converge_1d_p2.json"), "b"), kPass);
  for (const char* f : {"convergence.csv", "convergence_summary.csv", "modular_distance.csv", "truncation.csv", "study_checks.csv"}) {
    const auto a = slurp(dir_ / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(CliTest, ConvergeReportsSlopeNearTwo) {
  ASSERT_EQ(run_cmd("converge", shipped("converge_1d_p2.json")), kPass);
  std::istringstream in(slurp(dir_ / "out" / "convergence_summary.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "l2_slope,expected_l2_slope,witnessing_lambda");
  EXPECT_NEAR(std::stod(row.substr(0, row.find(','))), 2.0, 0.2);
}

TEST_F(CliTest, UniqueProbePasses) {
  EXPECT_EQ(run_cmd("unique-probe", shipped("unique_probe_1d.json")), kPass);
}

}  // namespace
}  // namespace musielak::cli
