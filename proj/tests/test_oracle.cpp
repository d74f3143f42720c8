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

#include "leastcore/enumeration.hpp"
#include "leastcore/experiments.hpp"
#include "leastcore/least_core.hpp"
#include "leastcore/oracle.hpp"
#include "test_util.hpp"

namespace leastcore {
namespace {

using testing::fig1;
using testing::veto;

std::vector<std::string> rendered(const std::vector<coalition>& family) {
  std::vector<std::string> out;
  for (const auto& s : family) out.push_back(s.to_string());
  return out;
}

TEST(Enumerate, MinimalWinning) {
  using v = std::vector<std::string>;
  EXPECT_EQ(rendered(enumerate_minimal_winning(fig1())), (v{"{1,2}", "{2,3}", "{2,4}", "{1,3,4}"}));
  EXPECT_EQ(rendered(enumerate_minimal_winning(weighted_voting_game(2, {1, 1}))), (v{"{1,2}"}));
  EXPECT_EQ(rendered(enumerate_minimal_winning(veto())), (v{"{1,2}", "{2,3}"}));
}

TEST(Enumerate, MinimalityByDefinition) {
  random_source rng(5);
  for (int t = 0; t < 40; ++t) {
    const int n = static_cast<int>(rng.uniform(1, 9));
    const auto g = testing::random_game(rng, n, 10);
    const auto family = enumerate_minimal_winning(g);
    std::size_t expected = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto s = coalition::from_mask(static_cast<std::size_t>(n), mask);
      if (!is_winning(g, s)) continue;
      bool minimal = true;
      for (auto i : s.members()) {
        auto t2 = s;
        t2.erase(i);
        if (is_winning(g, t2)) minimal = false;
      }
      expected += minimal;
    }
    EXPECT_EQ(family.size(), expected);
  }
}

TEST(Enumerate, PlayerLimit) {
  try {
    (void)enumerate_minimal_winning(weighted_voting_game(1, std::vector<std::int64_t>(21, 1)));
    FAIL();
  } catch (const size_error& e) {
    EXPECT_EQ(e.code(), error_code::too_many_players);
  }
}

TEST(Bruteforce, SpecValues) {
  const auto f = least_core_bruteforce(fig1());
  EXPECT_TRUE(f.exact);
  EXPECT_EQ(f.least_core.exact_epsilon->to_string(), "2/5");
  EXPECT_NEAR(f.least_core.epsilon_star, 0.4, 1e-12);
  const auto v = least_core_bruteforce(veto());
  EXPECT_NEAR(v.least_core.epsilon_star, 0.0, 1e-12);
  EXPECT_NEAR(v.least_core.payoff[1], 1.0, 1e-12);
}

TEST(Bruteforce, VectorGame) {
  const auto g = std::get<vector_voting_game>(parse_game(testing::read_fixture("two_rules.json")));
  const auto brute = least_core_bruteforce(g);
  const auto pipe = solve_least_core(g);
  EXPECT_NEAR(brute.least_core.epsilon_star, pipe.epsilon_star, 1e-8);
}

TEST(Certify, SpecExamples) {
  const std::vector<double> x{0.2, 0.4, 0.2, 0.2};
  EXPECT_TRUE(certify(fig1(), 0.4, x, 1e-9).pass);
  const std::vector<double> dictator{1.0, 0.0, 0.0, 0.0};
  const auto bad = certify(fig1(), 0.3, dictator, 1e-9);
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.worst_coalition_gap, 0.7, 1e-12);
  EXPECT_TRUE(is_winning(fig1(), bad.worst_coalition));
}

TEST(Certify, NegativeAndUnnormalizedPayoffs) {
  const std::vector<double> neg{-0.1, 0.7, 0.2, 0.2};
  EXPECT_FALSE(certify(fig1(), 0.9, neg, 1e-9).pass);
  const std::vector<double> over{0.3, 0.4, 0.2, 0.2};
  EXPECT_FALSE(certify(fig1(), 0.9, over, 1e-9).pass);
}

TEST(Certify, UsElectoralProportional) {
  const auto us = testing::load_weighted("us_electoral.txt");
  const auto x = proportional_payoff(us);
  EXPECT_TRUE(certify(us, 1.0 - 270.0 / 538.0, x, 1e-9).pass);
  EXPECT_FALSE(certify(us, 1.0 - 270.0 / 538.0 - 1e-6, x, 1e-9).pass);
}

TEST(Proportionality, Check) {
  const auto x = proportional_payoff(fig1());
  EXPECT_TRUE(proportionality_check(fig1(), x));
  const auto e2 = least_core_bruteforce(veto()).least_core.payoff;
  EXPECT_FALSE(proportionality_check(veto(), e2));
  const std::vector<double> wrong_size{1.0};
  EXPECT_THROW((void)proportionality_check(fig1(), wrong_size), error);
}

TEST(Pipeline, AgreesWithBruteforceOnFixtures) {
  for (const char* name : {"fig1.txt", "veto.txt", "tiny.txt", "symmetric.txt", "dictator.txt"}) {
    const auto g = testing::load_weighted(name);
    const auto brute = least_core_bruteforce(g).least_core.epsilon_star;
    EXPECT_NEAR(solve_least_core(g).epsilon_star, brute, 1e-8) << name;
    pipeline_options raw;
    raw.prune = false;
    EXPECT_NEAR(solve_least_core(g, raw).epsilon_star, brute, 1e-8) << name;
  }
}

TEST(Pipeline, RandomGamesAgreeWithBruteforce) {
  random_source rng(99);
  for (int t = 0; t < 60; ++t) {
    const int n = static_cast<int>(rng.uniform(2, 10));
    const auto g = testing::random_game(rng, n, 20);
    const auto brute = least_core_bruteforce(g).least_core;
    const auto pipe = solve_least_core(g);
    EXPECT_NEAR(pipe.epsilon_star, brute.epsilon_star, 1e-8) << to_text(g);
    EXPECT_TRUE(certify(g, pipe.epsilon_star, pipe.payoff, 1e-8).pass) << to_text(g);
  }
}

TEST(Pipeline, TightCertificate) {
  random_source rng(17);
  for (int t = 0; t < 40; ++t) {
    const auto g = testing::random_game(rng, static_cast<int>(rng.uniform(2, 9)), 12);
    const auto r = solve_least_core(g);
    if (r.epsilon_star < 1e-6) continue;
    // Nothing certifies below eps*: in particular not the optimal payoff.
    EXPECT_FALSE(certify(g, r.epsilon_star - 1e-7, r.payoff, 1e-8).pass) << to_text(g);
    EXPECT_NEAR(coalition_payoff(r.payoff, r.tight_witness), 1.0 - r.epsilon_star, 1e-8);
  }
}

TEST(Pipeline, ExactModeMatches) {
  pipeline_options opts;
  opts.solver.exact = true;
  const auto r = solve_least_core(fig1(), opts);
  ASSERT_TRUE(r.exact_epsilon.has_value());
  EXPECT_EQ(r.exact_epsilon->to_string(), "2/5");
  EXPECT_EQ(r.exact_payoff.size(), 4u);
}

}  // namespace
}  // namespace leastcore
