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


#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "leastcore/dag.hpp"
#include "leastcore/formulations.hpp"
#include "leastcore/least_core.hpp"
#include "leastcore/lp_format.hpp"
#include "leastcore/simplex.hpp"
#include "test_util.hpp"

namespace leastcore {
namespace {

using testing::fig1;

TEST(P2, ColumnOrderAndSize) {
  const auto model = build_p2(build_dag(fig1()));
  ASSERT_EQ(model.variable_count(), 56u);
  EXPECT_EQ(model.variable(0).name, "epsilon");
  EXPECT_EQ(model.variable(1).name, "yT");
  EXPECT_EQ(model.variable(2).name, "y(0,0)");
  EXPECT_EQ(model.variable(55).name, "x(4)");
  // cut + 40 skip + 31 take + 5 target + budget + anchor
  EXPECT_EQ(model.constraint_count(), 1u + 40u + 31u + 5u + 2u);
  EXPECT_EQ(model.row(0).name, "cut");
  EXPECT_EQ(model.row(model.constraint_count() - 1).name, "anchor");
  EXPECT_EQ(model.variables_with_role(role_kind::payoff).size(), 4u);
  EXPECT_EQ(model.variables_with_role(role_kind::y_vertex).size(), 50u);
}

TEST(P2, PrunedModelIsSmallerWithSameOptimum) {
  const auto full = build_p2(build_dag(fig1()));
  const auto small = build_p2(prune(build_dag(fig1())));
  EXPECT_LT(small.variable_count(), full.variable_count());
  const auto a = solve(full), b = solve(small);
  ASSERT_EQ(a.status, solve_status::optimal);
  ASSERT_EQ(b.status, solve_status::optimal);
  EXPECT_NEAR(a.objective, 0.4, 1e-9);
  EXPECT_NEAR(b.objective, 0.4, 1e-9);
}

TEST(P1, RowsAreMinimalWinningPlusBudget) {
  const auto model = build_p1(fig1());
  EXPECT_EQ(model.constraint_count(), 5u);
  EXPECT_EQ(model.variable_count(), 5u);
  EXPECT_EQ(model.row(0).name, "win(1,2)");
  EXPECT_EQ(model.row(4).name, "budget");
  EXPECT_THROW((void)build_p1(weighted_voting_game(1, std::vector<std::int64_t>(21, 1))),
               size_error);
}

TEST(FlowLp, Fig1Value) {
  const std::vector<double> x{0.2, 0.4, 0.2, 0.2};
  const auto model = build_flow_lp(prune(build_dag(fig1())), x);
  const auto sol = solve(model);
  ASSERT_EQ(sol.status, solve_status::optimal);
  EXPECT_NEAR(sol.objective, 0.6, 1e-9);
  const std::vector<double> short_x{0.5};
  EXPECT_THROW((void)build_flow_lp(build_dag(fig1()), short_x), error);
}

TEST(Extract, ReadsByRole) {
  const auto dag = prune(build_dag(fig1()));
  const auto model = build_p2(dag);
  const auto sol = solve(model);
  const auto lc = extract_least_core(model, sol, dag);
  EXPECT_NEAR(lc.epsilon_star, 0.4, 1e-9);
  ASSERT_EQ(lc.payoff.size(), 4u);
  EXPECT_NEAR(lc.min_winning_payoff, 0.6, 1e-9);
  EXPECT_TRUE(is_winning(fig1(), lc.tight_witness));
  EXPECT_LE(lc.diagnostics.coalition_gap, 1e-9);
  EXPECT_LE(lc.diagnostics.sum_residual, 1e-9);
}

TEST(Extract, RejectsBadInput) {
  const auto dag = build_dag(fig1());
  const auto model = build_p2(dag);
  lp_solution failed;
  failed.status = solve_status::infeasible;
  EXPECT_THROW((void)extract_least_core(model, failed, dag), solver_error);
  lp_model bare;
  bare.add_variable("z");
  lp_solution ok;
  ok.status = solve_status::optimal;
  ok.point = {0.0};
  try {
    (void)extract_least_core(bare, ok, dag);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), error_code::role_metadata_missing);
  }
}

TEST(LpFormat, Identifiers) {
  EXPECT_EQ(lp_identifier("y(2,7)"), "y_2_7");
  EXPECT_EQ(lp_identifier("x(1)"), "x_1");
  EXPECT_EQ(lp_identifier("2abc"), "n2abc");
  EXPECT_EQ(lp_identifier("e5"), "ne5");
  EXPECT_EQ(lp_identifier(""), "n");
}

TEST(LpFormat, RoundTripPreservesOptimum) {
  for (const auto& game : {fig1(), testing::veto(), weighted_voting_game(7, {3, 3, 2, 2, 1})}) {
    const auto model = build_p2(prune(build_dag(game)));
    const auto text = export_lp_file(model);
    EXPECT_EQ(text, export_lp_file(model));
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) EXPECT_LE(line.size(), 255u);
    EXPECT_NE(text.find(" epsilon free"), std::string::npos);
    const auto back = testing::read_lp(text);
    EXPECT_EQ(back.constraint_count(), model.constraint_count());
    EXPECT_EQ(back.variable_count(), model.variable_count());
    const auto a = solve(model), b = solve(back);
    ASSERT_EQ(a.status, solve_status::optimal);
    ASSERT_EQ(b.status, solve_status::optimal);
    EXPECT_NEAR(a.objective, b.objective, 1e-9);
  }
}

TEST(LpFormat, LongRowsWrap) {
  lp_model model;
  std::vector<lp_term> row;
  for (int j = 0; j < 300; ++j) {
    row.push_back({model.add_variable("long_variable_name(" + std::to_string(j) + ")"), 1.5});
  }
  model.add_constraint("wide", row, relation::less_equal, 1.0);
  model.set_objective(objective_sense::maximize, row);
  const auto text = export_lp_file(model);
  std::istringstream in(text);
  std::string line;
  std::size_t longest = 0, count = 0;
  while (std::getline(in, line)) {
    longest = std::max(longest, line.size());
    ++count;
  }
  EXPECT_LE(longest, 255u);
  EXPECT_GT(count, 20u);
  const auto back = testing::read_lp(text);
  ASSERT_EQ(back.constraint_count(), 1u);
  EXPECT_EQ(back.row(0).terms.size(), 300u);
  EXPECT_NEAR(solve(back).objective, 1.0, 1e-9);
}

}  // namespace
}  // namespace leastcore
