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

#include <variant>
#include <vector>

#include "leastcore/coalition.hpp"
#include "leastcore/error.hpp"
#include "leastcore/games.hpp"
#include "test_util.hpp"

namespace leastcore {
namespace {

using testing::fig1;

TEST(Coalition, MembersAndRendering) {
  coalition s(5, {1, 3});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains(1));
  EXPECT_FALSE(s.contains(0));
  EXPECT_EQ(s.to_string(), "{2,4}");
  s.erase(1);
  EXPECT_EQ(s.to_string(), "{4}");
  EXPECT_TRUE(coalition(3).empty());
  EXPECT_EQ(coalition::grand(3).to_string(), "{1,2,3}");
}

TEST(Coalition, WideSets) {
  auto s = coalition::grand(130);
  EXPECT_EQ(s.size(), 130u);
  s.erase(64);
  EXPECT_FALSE(s.contains(64));
  EXPECT_TRUE(s.contains(129));
  EXPECT_EQ(coalition::from_mask(4, 0xFF).size(), 4u);
}

TEST(Validate, AcceptsWellFormedGames) {
  EXPECT_FALSE(validate(fig1()).has_value());
  EXPECT_FALSE(validate(weighted_voting_game(1, {1})).has_value());
  EXPECT_FALSE(validate(weighted_voting_game(1, {0, 1})).has_value());
}

TEST(Validate, RejectsBadGames) {
  EXPECT_EQ(validate(weighted_voting_game(1, {})), error_code::empty_player_set);
  EXPECT_EQ(validate(weighted_voting_game(1, {2, -1})), error_code::negative_weight);
  EXPECT_EQ(validate(weighted_voting_game(0, {1, 1})), error_code::quota_out_of_range);
  EXPECT_EQ(validate(weighted_voting_game(3, {1, 1})), error_code::quota_out_of_range);
  const std::int64_t big = std::numeric_limits<std::int64_t>::max() / 2 + 1;
  EXPECT_EQ(validate(weighted_voting_game(1, {big, big})), error_code::quota_out_of_range);
}

TEST(Validate, VectorGames) {
  vector_voting_game none({}, combine_mode::intersection);
  EXPECT_EQ(validate(none), error_code::empty_rule_set);
  vector_voting_game mismatch({fig1(), weighted_voting_game(1, {1, 1})}, combine_mode::union_);
  EXPECT_EQ(validate(mismatch), error_code::player_count_mismatch);
  EXPECT_THROW(require_valid(mismatch), validation_error);
}

TEST(Validate, RequireValidCarriesCode) {
  try {
    require_valid(weighted_voting_game(9, {1, 2}));
    FAIL();
  } catch (const validation_error& e) {
    EXPECT_EQ(e.code(), error_code::quota_out_of_range);
    EXPECT_NE(std::string(e.what()).find("[1, 3]"), std::string::npos);
  }
}

TEST(CharacteristicFunction, WeightedGame) {
  const auto g = fig1();
  EXPECT_TRUE(is_winning(g, coalition(4, {0, 1})));
  EXPECT_TRUE(is_winning(g, coalition(4, {0, 2, 3})));
  EXPECT_FALSE(is_winning(g, coalition(4, {0, 2})));
  EXPECT_FALSE(is_winning(g, coalition(4)));
  EXPECT_EQ(coalition_weight(g, coalition::grand(4)), 9);
}

TEST(CharacteristicFunction, VectorCombination) {
  const weighted_voting_game a(2, {1, 1, 0});
  const weighted_voting_game b(1, {0, 0, 1});
  const vector_voting_game both({a, b}, combine_mode::intersection);
  const vector_voting_game either({a, b}, combine_mode::union_);
  const coalition ab(3, {0, 1}), c(3, {2});
  EXPECT_FALSE(evaluate_vector(both, ab));
  EXPECT_TRUE(evaluate_vector(either, ab));
  EXPECT_TRUE(evaluate_vector(either, c));
  EXPECT_TRUE(evaluate_vector(both, coalition::grand(3)));
}

TEST(CharacteristicFunction, Monotone) {
  const auto g = fig1();
  for (std::uint64_t s = 0; s < 16; ++s) {
    for (std::uint64_t t = 0; t < 16; ++t) {
      if ((s & t) != s) continue;
      if (is_winning(g, coalition::from_mask(4, s))) {
        EXPECT_TRUE(is_winning(g, coalition::from_mask(4, t)));
      }
    }
  }
}

TEST(CoalitionPayoff, SumsMembers) {
  const std::vector<double> x{0.2, 0.4, 0.2, 0.2};
  EXPECT_DOUBLE_EQ(coalition_payoff(x, coalition(4, {1, 3})), 0.6);
  EXPECT_DOUBLE_EQ(coalition_payoff(x, coalition(4)), 0.0);
}

TEST(Parse, TextFormat) {
  auto g = std::get<weighted_voting_game>(parse_game("# comment\n\n 5; 2 4 2 1\n"));
  EXPECT_EQ(g, fig1());
  auto h = std::get<weighted_voting_game>(parse_game("5;2,4, 2,1"));
  EXPECT_EQ(h, fig1());
  EXPECT_EQ(to_text(g), "5; 2 4 2 1");
}

TEST(Parse, JsonFormats) {
  auto g = std::get<weighted_voting_game>(parse_game(R"({"quota": 5, "weights": [2, 4, 2, 1]})"));
  EXPECT_EQ(g, fig1());
  auto v = std::get<vector_voting_game>(parse_game(
      R"({"combine": "union", "rules": [{"quota": 1, "weights": [1, 0]},
                                        {"quota": 1, "weights": [0, 1]}]})"));
  EXPECT_EQ(v.rule_count(), 2u);
  EXPECT_EQ(v.combine(), combine_mode::union_);
  auto round = std::get<vector_voting_game>(parse_game(to_json(v).dump()));
  EXPECT_EQ(round, v);
}

TEST(Parse, SyntaxErrors) {
  for (const char* bad : {"", "5 2 4", "x; 1 2", "5; 1 two", "5; 1,,2", "5; 1\n6; 2",
                          "{\"quota\": 1}", "{\"quota\": 1.5, \"weights\": [1]}",
                          "{\"rules\": [], \"combine\": \"xor\"}", "{not json",
                          "5; 99999999999999999999"}) {
    try {
      (void)parse_game(bad);
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const syntax_error& e) {
      EXPECT_EQ(e.code(), error_code::syntax_error) << bad;
    }
  }
}

TEST(Parse, ValidationAndCaps) {
  try {
    (void)parse_game("10; 1 2");
    FAIL();
  } catch (const validation_error& e) {
    EXPECT_EQ(e.code(), error_code::quota_out_of_range);
  }
  parse_options opts;
  opts.total_weight_cap = 10;
  try {
    (void)parse_game("5; 6 6", opts);
    FAIL();
  } catch (const validation_error& e) {
    EXPECT_EQ(e.code(), error_code::total_weight_cap_exceeded);
  }
}

TEST(Parse, Fixtures) {
  const auto us = testing::load_weighted("us_electoral.txt");
  EXPECT_EQ(us.player_count(), 51u);
  EXPECT_EQ(us.total_weight(), 538);
  EXPECT_EQ(us.quota(), 270);
  const auto eu = testing::load_weighted("eu_council.txt");
  EXPECT_EQ(eu.player_count(), 27u);
  EXPECT_EQ(eu.total_weight(), 345);
  EXPECT_EQ(eu.quota(), 255);
  const auto v = std::get<vector_voting_game>(parse_game(testing::read_fixture("two_rules.json")));
  EXPECT_EQ(v.player_count(), 4u);
}

}  // namespace
}  // namespace leastcore
