// Copyright 2026 The mull Authors
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

#include <cstdio>
#include <filesystem>

#include "mull/cli.hpp"

namespace mull::cli {
namespace {

const std::string kData = MULL_DATA_DIR;

RunResult cli(std::vector<std::string> args, std::optional<std::string> env = std::nullopt) {
  return main_with(args, env);
}

Json machine(std::vector<std::string> args, int expect_exit = 0, std::optional<std::string> env = std::nullopt) {
  args.insert(args.begin(), "--machine");
  RunResult r = cli(args, env);
  EXPECT_EQ(r.exit_code, expect_exit) << r.report << r.diagnostics;
  return Json::parse(r.report);
}

TEST(Cli, VarianceReportsSort) {
  Json r = machine({"variance", "mu x. 1 + x"});
  EXPECT_EQ(r["sort"], "+");
  EXPECT_EQ(r["well_sorted"], true);
  Json bad = machine({"variance", "mu x. ~x"}, 1);
  EXPECT_EQ(bad["well_sorted"], false);
  EXPECT_TRUE(bad["sort"].is_null());
}

TEST(Cli, ParseErrorIsPositioned) {
  RunResult r = cli({"variance", "mu x 1 + x"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.diagnostics.find("1:6"), std::string::npos) << r.diagnostics;
  EXPECT_NE(r.diagnostics.find("  mu x 1 + x\n       ^"), std::string::npos) << r.diagnostics;
  Json j = machine({"variance", "mu x 1 + x"}, 2);
  EXPECT_EQ(j["error"]["kind"], "input");
  EXPECT_EQ(j["error"]["line"], 1);
  EXPECT_EQ(j["error"]["column"], 6);
}

TEST(Cli, InterpPhaseExample) {
  Json r = machine({"interp", "--model", "phase", "--space", kData + "/sign.ph", "mu x. x"});
  EXPECT_EQ(r["fact"], Json::array());
  EXPECT_EQ(r["holds"], false);
  EXPECT_EQ(r["stabilized"], true);
  Json one = machine({"interp", "--model", "phase", "--space", kData + "/sign.ph", "1 * bot"});
  EXPECT_EQ(one["fact"], Json::array({"1"}));
  EXPECT_EQ(one["holds"], true);
}

TEST(Cli, InterpRelAndDepthOverrides) {
  Json r = machine({"interp", "mu x. 1 + x"});
  EXPECT_EQ(r["budgets"]["depth"], 4);
  EXPECT_EQ(r["size"], 4);
  EXPECT_EQ(r["stabilized"], false);
  Json env = machine({"interp", "mu x. 1 + x"}, 0, "2");
  EXPECT_EQ(env["size"], 2);
  Json flag = machine({"interp", "--depth", "3", "mu x. 1 + x"}, 0, "2");
  EXPECT_EQ(flag["size"], 3);
  EXPECT_EQ(cli({"interp", "1"}, "zero").exit_code, 2);
  Json fin = machine({"interp", "mu x. 1 + 1", "-k", "3"});
  EXPECT_EQ(fin["stabilized"], true);
}

TEST(Cli, InterpTotalityAndWrel) {
  Json t = machine({"interp", "--model", "totality", "-k", "3", "mu x. 1 + x"});
  EXPECT_EQ(t["total_minimal"], Json::parse(R"([["#0"],["#1"],["#2"]])"));
  EXPECT_EQ(t["carrier_stabilized"], false);
  EXPECT_EQ(t["stabilized"], true);
  Json w = machine({"interp", "--model", "wrel", "1 + 1"});
  EXPECT_EQ(w["dimension"], 2);
  EXPECT_EQ(w["web"], Json::parse(R"(["inl *","inr *"])"));
  EXPECT_TRUE(w.contains("stabilized"));
}

TEST(Cli, InterpInputErrors) {
  EXPECT_EQ(cli({"interp", "--model", "totality", "1 -o 1"}).exit_code, 2);
  EXPECT_EQ(cli({"interp", "x + 1"}).exit_code, 2);
  EXPECT_EQ(cli({"interp", "mu x. ~x"}).exit_code, 2);
  EXPECT_EQ(cli({"interp", "--model", "phase", "1"}).exit_code, 2);
  EXPECT_EQ(cli({"interp", "--model", "phase", "--space", kData + "/missing.ph", "1"}).exit_code, 2);
  EXPECT_EQ(cli({"interp", "--model", "coherence", "1"}).exit_code, 2);
  EXPECT_EQ(cli({"interp", "--depth", "0", "1"}).exit_code, 2);
}

TEST(Cli, BudgetExhaustionIsSemanticFailure) {
  Json r = machine({"interp", "--max-carrier", "10", "!!(1 + 1 + 1)"}, 1);
  EXPECT_EQ(r["error"]["kind"], "semantic");
}

TEST(Cli, PhaseSearch) {
  Json r = machine({"phase-search", "bot", "--max-size", "2"});
  EXPECT_EQ(r["found"], true);
  EXPECT_EQ(r["counter_model"]["elements"], Json::array({"e"}));
  EXPECT_EQ(r["counter_model"]["pole"], Json::array());
  Json none = machine({"phase-search", "top"});
  EXPECT_EQ(none["found"], false);
  EXPECT_TRUE(none["counter_model"].is_null());
  EXPECT_EQ(cli({"phase-search", "bot", "--max-size", "6"}).exit_code, 2);
}

TEST(Cli, FixWalk) {
  Json r = machine({"fix", "--expr", kData + "/walk.fx", "--tol", "1e-9"});
  EXPECT_NEAR(r["value"]["x"].get<double>(), 1.0 / 3.0, 1e-9);
  EXPECT_LE(r["residual"].get<double>(), 1e-9);
  EXPECT_EQ(r["mode"], "floating");
  EXPECT_EQ(r["tolerance"], 1e-9);
  RunResult h = cli({"fix", "--expr", kData + "/walk.fx", "--tol", "1e-9"});
  EXPECT_NE(h.report.find("0.33333333"), std::string::npos) << h.report;
  Json exact = machine({"fix", "--expr", kData + "/half.fx", "--tol", "1e-6", "--exact"});
  EXPECT_EQ(exact["mode"], "exact");
  EXPECT_NEAR(exact["value"]["x"].get<double>(), 1.0, 1e-6);
}

TEST(Cli, FixBudgetCarriesResidual) {
  std::string path = (std::filesystem::temp_directory_path() / "mull_grow.fx").string();
  {
    std::ofstream out(path);
    out << "vars x\nx = 1 + x\n";
  }
  Json r = machine({"fix", "--expr", path, "--max-iter", "10"}, 1);
  EXPECT_EQ(r["converged"], false);
  EXPECT_EQ(r["value"]["x"], 10.0);
  EXPECT_EQ(r["residual"], 1.0);
  std::remove(path.c_str());
}

TEST(Cli, Polar) {
  Json in = machine({"polar", "--generators", kData + "/box.gen", "--point", kData + "/center.pt"});
  EXPECT_EQ(in["member"], true);
  EXPECT_EQ(in["supremum"], "1");
  Json out = machine({"polar", "--generators", kData + "/axis.gen", "--point", kData + "/offaxis.pt"});
  EXPECT_EQ(out["member"], false);
  EXPECT_EQ(out["supremum"], "unbounded");
  EXPECT_EQ(out["unbounded_coordinates"], Json::array({"b"}));
  EXPECT_EQ(cli({"polar", "--generators", kData + "/box.gen", "--point", kData + "/box.gen"}).exit_code, 2);
}

TEST(Cli, Admissible) {
  EXPECT_EQ(machine({"admissible", "--pole", "unit-interval"})["verdict"], "ADMISSIBLE");
  EXPECT_EQ(machine({"admissible", "--pole", "totality"})["verdict"], "NOT_ADMISSIBLE");
  Json n = machine({"admissible", "--pole", "naturals"});
  EXPECT_EQ(n["verdict"], "NOT_ADMISSIBLE");
  EXPECT_EQ(n["witness"], Json::parse(R"(["0","1","2","3","4","..."])"));
  EXPECT_EQ(n["witness_supremum"], "inf");
  EXPECT_EQ(cli({"admissible", "--pole", "nope"}).exit_code, 2);
}

TEST(Cli, MachineOutputIsStable) {
  std::vector<std::vector<std::string>> runs = {
      {"--machine", "interp", "--model", "totality", "mu x. 1 + x * x"},
      {"--machine", "phase-search", "1 | 1", "--max-size", "3"},
      {"--machine", "fix", "--expr", kData + "/walk.fx"},
  };
  for (const auto& a : runs) EXPECT_EQ(cli(a).report, cli(a).report);
}

TEST(Cli, UsageErrorsAndHelp) {
  EXPECT_EQ(cli({}).exit_code, 2);
  EXPECT_EQ(cli({"frobnicate"}).exit_code, 2);
  EXPECT_EQ(cli({"fix"}).exit_code, 2);
  RunResult h = cli({"--help"});
  EXPECT_EQ(h.exit_code, 0);
  EXPECT_NE(h.report.find("phase-search"), std::string::npos);
}

TEST(Cli, OutputFile) {
  std::string path = (std::filesystem::temp_directory_path() / "mull_report.json").string();
  RunResult r = cli({"--machine", "-o", path, "variance", "1"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.report.empty());
  std::ifstream in(path);
  EXPECT_EQ(Json::parse(in)["sort"], "+");
  std::remove(path.c_str());
}

}  // namespace
}  // namespace mull::cli
