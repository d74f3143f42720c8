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


// Computes the least core of a small weighted voting game and checks the
// result against the explicit coalition LP.

#include <cstdio>

#include "leastcore/least_core.hpp"
#include "leastcore/oracle.hpp"

int main() {
  using namespace leastcore;
  const weighted_voting_game game(5, {2, 4, 2, 1});

  const auto r = solve_least_core(game);
  std::printf("epsilon* = %.6f\n", r.epsilon_star);
  for (std::size_t i = 0; i < r.payoff.size(); ++i) std::printf("  x%zu = %.6f\n", i + 1, r.payoff[i]);
  std::printf("tight coalition %s\n", r.tight_witness.to_string().c_str());

  const auto report = certify(game, r.epsilon_star, r.payoff, 1e-9);
  std::printf("certified: %s\n", report.pass ? "yes" : "no");

  const auto brute = least_core_bruteforce(game);
  std::printf("explicit LP: %s\n", brute.least_core.exact_epsilon->to_string().c_str());
  return report.pass ? 0 : 1;
}
