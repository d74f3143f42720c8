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

#include <string>
#include <vector>

#include "leastcore/dag.hpp"
#include "leastcore/enumeration.hpp"
#include "leastcore/error.hpp"
#include "leastcore/experiments.hpp"
#include "test_util.hpp"

namespace leastcore {
namespace {

using testing::fig1;

TEST(Dag, Fig1Counts) {
  const auto dag = build_dag(fig1());
  EXPECT_EQ(dag.vertex_count(), 50u);
  EXPECT_EQ(dag.arc_count(0), 40u);
  EXPECT_EQ(dag.arc_count(1), 8u);
  EXPECT_EQ(dag.arc_count(2), 6u);
  EXPECT_EQ(dag.arc_count(3), 8u);
  EXPECT_EQ(dag.arc_count(4), 9u);
  EXPECT_EQ(dag.targets().size(), 5u);
  EXPECT_EQ(dag.vertex_label(dag.id(2, 6)), "2,6");
}

TEST(Dag, PathCountEqualsWinningCount) {
  EXPECT_EQ(count_paths(build_dag(fig1())), count_winning(fig1()));
  random_source rng(7);
  for (int t = 0; t < 60; ++t) {
    const int n = static_cast<int>(rng.uniform(1, 15));
    const auto g = testing::random_game(rng, n, 12);
    const auto dag = build_dag(g);
    EXPECT_EQ(count_paths(dag), count_winning(g)) << to_text(g);
    EXPECT_EQ(count_paths(prune(dag)), count_winning(g)) << to_text(g);
  }
}

TEST(Dag, PruneKeepsOnlyUsefulVertices) {
  const auto pruned = prune(build_dag(fig1()));
  EXPECT_TRUE(pruned.is_pruned());
  EXPECT_LT(pruned.vertex_count(), 50u);
  EXPECT_EQ(pruned.targets().size(), 5u);
  // Every live vertex lies on some source-target path: (4,0) cannot reach
  // a target, (1,9) is not reachable from the source.
  EXPECT_FALSE(pruned.is_live(pruned.id(4, 0)));
  EXPECT_FALSE(pruned.is_live(pruned.id(1, 9)));
  EXPECT_TRUE(pruned.is_live(pruned.source()));
}

TEST(Dag, VectorGraphCountsWinning) {
  random_source rng(11);
  for (int t = 0; t < 40; ++t) {
    const int n = static_cast<int>(rng.uniform(1, 8));
    const auto a = testing::random_game(rng, n, 6);
    const auto b = testing::random_game(rng, n, 6);
    for (auto mode : {combine_mode::intersection, combine_mode::union_}) {
      const vector_voting_game g({a, b}, mode);
      const auto dag = build_vector_dag(g);
      EXPECT_EQ(count_paths(dag), count_winning(g));
      EXPECT_EQ(count_paths(prune(dag)), count_winning(g));
    }
  }
}

TEST(Dag, ShortestPathMatchesEnumeration) {
  random_source rng(3);
  for (int t = 0; t < 80; ++t) {
    const int n = static_cast<int>(rng.uniform(1, 10));
    const auto g = testing::random_game(rng, n, 15);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = static_cast<double>(rng.uniform(0, 1000)) / 1000.0;
    const auto dag = build_dag(g);
    const auto res = min_winning_payoff(dag, x);
    const double expected = testing::enumerated_min_payoff(g, x);
    EXPECT_NEAR(res.value, expected, 1e-12);
    EXPECT_TRUE(is_winning(g, res.witness));
    EXPECT_NEAR(coalition_payoff(x, res.witness), res.value, 1e-12);
    EXPECT_NEAR(min_winning_payoff(prune(dag), x).value, expected, 1e-12);
  }
}

TEST(Dag, ShortestPathRejectsWrongLength) {
  const std::vector<double> x{0.5, 0.5};
  try {
    (void)min_winning_payoff(build_dag(fig1()), x);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), error_code::dimension_mismatch);
  }
}

TEST(Dag, VertexCap) {
  dag_options opts;
  opts.vertex_cap = 49;
  try {
    (void)build_dag(fig1(), opts);
    FAIL();
  } catch (const size_error& e) {
    EXPECT_EQ(e.code(), error_code::size_cap_exceeded);
  }
}

TEST(Dag, DotExport) {
  const auto dot = to_dot(prune(build_dag(fig1())));
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("doublecircle"), std::string::npos);
  EXPECT_NE(dot.find("->"), std::string::npos);
  dot_options small;
  small.max_vertices = 3;
  EXPECT_THROW((void)to_dot(build_dag(fig1()), small), size_error);
}

}  // namespace
}  // namespace leastcore
