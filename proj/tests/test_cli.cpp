// Copyright 2026 The leastcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Runs the command-line tool as a subprocess and checks exit codes, JSON
// output shape, and agreement between its subcommands.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "leastcore/simplex.hpp"
#include "test_util.hpp"

namespace leastcore {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct run_result {
  int status = -1;
  std::string out;
};

run_result run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(LEASTCORE_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  run_result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string data(const std::string& name) { return testing::fixture_path(name); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("leastcore_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  fs::path dir_;
};

// Keys and JSON types every `solve --json` document carries.
void expect_solve_schema(const json& j, std::size_t n) {
  ASSERT_TRUE(j.is_object());
  EXPECT_EQ(j.at("command"), "solve");
  EXPECT_TRUE(j.at("game").is_object());
  EXPECT_TRUE(j.at("epsilon").is_number());
  EXPECT_TRUE(j.at("epsilon_exact").is_null() || j.at("epsilon_exact").is_string());
  ASSERT_TRUE(j.at("payoff").is_array());
  EXPECT_EQ(j.at("payoff").size(), n);
  EXPECT_TRUE(j.at("tight_coalition").is_array());
  EXPECT_TRUE(j.at("min_winning_payoff").is_number());
  EXPECT_TRUE(j.at("certified").is_boolean());
  for (const char* k : {"sum_residual", "negativity", "coalition_gap", "tolerance"}) {
    EXPECT_TRUE(j.at("certificate").at(k).is_number()) << k;
  }
  for (const char* k : {"rows", "columns", "nonzeros", "graph_vertices"}) {
    EXPECT_TRUE(j.at("model").at(k).is_number_unsigned()) << k;
  }
  EXPECT_TRUE(j.at("model").at("pruned").is_boolean());
  for (const char* k : {"iterations", "phase_one_iterations"}) {
    EXPECT_TRUE(j.at("solver").at(k).is_number_unsigned()) << k;
  }
  EXPECT_TRUE(j.at("solver").at("used_bland").is_boolean());
  EXPECT_TRUE(j.at("timings").at("build_seconds").is_number());
  EXPECT_TRUE(j.at("timings").at("solve_seconds").is_number());
}

TEST_F(Cli, SolveJson) {
  const auto r = run("--json solve " + data("fig1.txt"));
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  expect_solve_schema(j, 4);
  EXPECT_NEAR(j["epsilon"].get<double>(), 0.4, 1e-9);
  EXPECT_TRUE(j["certified"].get<bool>());
  EXPECT_NEAR(j["min_winning_payoff"].get<double>(), 0.6, 1e-9);
}

TEST_F(Cli, SolveTextAndDot) {
  const auto dot = path("g.dot");
  const auto r = run("solve " + data("fig1.txt") + " --dot " + dot);
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("epsilon* = 0.400000000000"), std::string::npos);
  EXPECT_NE(r.out.find("certificate: pass"), std::string::npos);
  EXPECT_EQ(slurp(dot).rfind("digraph", 0), 0u);
}

TEST_F(Cli, SolveExactAndUnpruned) {
  const auto r = run("--json --exact --no-prune solve " + data("fig1.txt"));
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  expect_solve_schema(j, 4);
  EXPECT_EQ(j["epsilon_exact"], "2/5");
  EXPECT_EQ(j["payoff_exact"].size(), 4u);
  EXPECT_FALSE(j["model"]["pruned"].get<bool>());
  EXPECT_EQ(j["model"]["graph_vertices"], 50u);
}

TEST_F(Cli, SolveVectorGame) {
  const auto r = run("--json solve " + data("two_rules.json"));
  ASSERT_EQ(r.status, 0);
  expect_solve_schema(json::parse(r.out), 4);
}

TEST_F(Cli, SolveIsDeterministic) {
  const auto a = json::parse(run("--json solve " + data("veto.txt")).out);
  const auto b = json::parse(run("--json solve " + data("veto.txt")).out);
  EXPECT_EQ(a["payoff"], b["payoff"]);
  EXPECT_EQ(a["solver"], b["solver"]);
}

TEST_F(Cli, SolveAndOracleAgreeOnFixtures) {
  for (const char* name : {"fig1.txt", "veto.txt", "tiny.txt", "symmetric.txt", "dictator.txt", "two_rules.json"}) {
    const auto s = run("--json solve " + data(name));
    const auto o = run("--json oracle " + data(name));
    ASSERT_EQ(s.status, 0) << name;
    ASSERT_EQ(o.status, 0) << name;
    const auto js = json::parse(s.out), jo = json::parse(o.out);
    EXPECT_NEAR(js["epsilon"].get<double>(), jo["epsilon"].get<double>(), 1e-8) << name;
    EXPECT_LE(jo["difference"].get<double>(), 1e-8) << name;
  }
}

TEST_F(Cli, OracleJson) {
  const auto r = run("--json oracle " + data("fig1.txt"));
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("command"), "oracle");
  EXPECT_EQ(j.at("epsilon_exact"), "2/5");
  EXPECT_EQ(j.at("minimal_winning"), json::parse("[[1,2],[2,3],[2,4],[1,3,4]]"));
  EXPECT_TRUE(j.at("pipeline_epsilon").is_number());
}

TEST_F(Cli, ExportFormulations) {
  const auto p2 = path("p2.lp");
  auto r = run("--json --no-prune export " + data("fig1.txt") + " " + p2 + " --formulation p2");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["columns"], 56u);
  EXPECT_EQ(testing::read_lp(slurp(p2)).variable_count(), 56u);

  const auto p1 = path("p1.lp");
  r = run("--json export " + data("fig1.txt") + " " + p1 + " --formulation p1");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["rows"], 5u);
  EXPECT_EQ(testing::read_lp(slurp(p1)).constraint_count(), 5u);

  const auto flow = path("flow.lp");
  r = run("export " + data("fig1.txt") + " " + flow + " --formulation flow --x 0.2,0.4,0.2,0.2");
  ASSERT_EQ(r.status, 0);
  const auto sol = solve(testing::read_lp(slurp(flow)));
  ASSERT_EQ(sol.status, solve_status::optimal);
  EXPECT_NEAR(sol.objective, 0.6, 1e-9);
}

TEST_F(Cli, ExportErrors) {
  EXPECT_EQ(run("export " + data("fig1.txt") + " " + path("f.lp") + " --formulation flow").status, 2);
  EXPECT_EQ(run("export " + data("fig1.txt") + " " + path("f.lp") + " --formulation flow --x 1,0").status, 2);
  EXPECT_EQ(run("export " + data("fig1.txt") + " " + path("f.lp") + " --formulation flow --x a,b,c,d").status, 2);
  EXPECT_EQ(run("export " + data("fig1.txt") + " " + path("f.lp") + " --formulation p3").status, 2);
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("solve " + write("bad.txt", "5 2 4")).status, 2);
  EXPECT_EQ(run("solve " + write("quota.txt", "50; 2 4")).status, 2);
  EXPECT_EQ(run("solve " + write("neg.txt", "1; 2 -4")).status, 2);
  EXPECT_EQ(run("solve " + path("missing.txt")).status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("--tol -1 solve " + data("fig1.txt")).status, 2);
  const auto msg = run("solve " + write("neg2.txt", "1; 2 -4"), true);
  EXPECT_NE(msg.out.find("negative weight"), std::string::npos);
}

TEST_F(Cli, SizeGuardsExitFour) {
  EXPECT_EQ(run("solve " + write("big.txt", "1; 2000000")).status, 4);
  EXPECT_EQ(run("oracle " + write("many.txt", "3; 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1")).status, 4);
  EXPECT_EQ(run("--exact solve " + data("us_electoral.txt")).status, 4);
}

TEST_F(Cli, BenchSinglePlayer) {
  const auto csv = path("b.csv");
  const auto r = run("--json bench --n 1 --U 1 --instances 2 --out " + csv);
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["command"], "bench");
  ASSERT_EQ(j["cells"].size(), 1u);
  EXPECT_EQ(j["cells"][0]["failures"], 0u);
  EXPECT_EQ(j["cells"][0]["mean_epsilon"].get<double>(), 0.0);
  std::istringstream in(slurp(csv));
  const auto rows = read_bench_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].total, 1);
  EXPECT_EQ(rows[0].quota, 1);
}

TEST_F(Cli, BenchMaskedOutputIsReproducible) {
  const auto a = run("--seed 7 bench --n 4,6 --U 5 --instances 3 --mask-times --out -");
  const auto b = run("--seed 7 bench --n 4,6 --U 5 --instances 3 --mask-times --out -");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind(std::string(bench_csv_header), 0), 0u);
  const auto c = run("--seed 8 bench --n 4,6 --U 5 --instances 3 --mask-times --out -");
  EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, RegressPlantedModel) {
  std::ostringstream csv;
  csv << "n,W,build_seconds,solve_seconds\n";
  for (int n : {10, 20, 40}) {
    for (int w : {100, 300, 700}) {
      csv << n << ',' << w << ",0," << detail::format_double(std::exp(2 * std::log(n) + std::log(w))) << '\n';
    }
  }
  const auto r = run("--json regress " + write("planted.csv", csv.str()));
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["beta"][0].get<double>(), 0.0, 1e-8);
  EXPECT_NEAR(j["beta"][1].get<double>(), 2.0, 1e-9);
  EXPECT_NEAR(j["beta"][2].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(j["r_squared"].get<double>(), 1.0, 1e-12);
}

TEST_F(Cli, RegressErrors) {
  const auto two = write("two.csv", "n,W,build_seconds,solve_seconds\n10,100,0,1\n20,300,0,2\n10,100,0,1.5\n");
  EXPECT_EQ(run("regress " + two).status, 5);
  EXPECT_EQ(run("regress " + write("junk.csv", "hello\n1\n")).status, 2);
  EXPECT_EQ(run("regress " + path("none.csv")).status, 2);
}

TEST_F(Cli, PropSinglePlayer) {
  const auto r = run("prop --n 1 --vectors 10");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("n,vectors,instances", 0), 0u);
  EXPECT_NE(r.out.find(",100.00\n"), std::string::npos);
  const auto j = json::parse(run("--json prop --n 1,3 --vectors 4").out);
  EXPECT_EQ(j["command"], "prop");
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0]["ratio_percent"].get<double>(), 100.0);
  for (const char* k : {"n", "vectors", "instances", "proportional", "non_proportional", "skipped", "hard_errors"}) {
    EXPECT_TRUE(j["rows"][1].at(k).is_number_integer()) << k;
  }
}

TEST_F(Cli, Help) {
  const auto r = run("--help");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
}

}  // namespace
}  // namespace leastcore
