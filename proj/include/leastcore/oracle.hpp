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

#ifndef LEASTCORE_ORACLE_HPP
#define LEASTCORE_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "leastcore/dag.hpp"
#include "leastcore/enumeration.hpp"
#include "leastcore/error.hpp"
#include "leastcore/formulations.hpp"
#include "leastcore/games.hpp"
#include "leastcore/least_core.hpp"
#include "leastcore/simplex.hpp"

namespace leastcore {

/// Membership of a payoff vector in the eps-core, up to a tolerance.
struct feasibility_report {
  double sum_residual = 0.0;
  double negativity = 0.0;
  /// max over winning S of (1 - eps - x(S)).
  double worst_coalition_gap = 0.0;
  coalition worst_coalition;
  double tolerance = 0.0;
  bool pass = false;
};

namespace detail {

inline feasibility_report certify_on(const layered_dag& dag, double epsilon,
                                     std::span<const double> x, double tol) {
  feasibility_report report;
  report.tolerance = tol;
  double sum = 0.0, lowest = 0.0;
  for (double v : x) {
    sum += v;
    lowest = std::min(lowest, v);
  }
  report.sum_residual = std::abs(sum - 1.0);
  report.negativity = std::max(0.0, -lowest);
  const auto path = min_winning_payoff(dag, x);
  report.worst_coalition_gap = 1.0 - epsilon - path.value;
  report.worst_coalition = path.witness;
  report.pass = report.sum_residual <= tol && report.negativity <= tol &&
                report.worst_coalition_gap <= tol;
  return report;
}

}  // namespace detail

/// Checks that x is a pre-imputation in the eps-core. The worst coalition is
/// found by the shortest-path recursion, so this scales to the same games as
/// the main pipeline.
inline feasibility_report certify(const weighted_voting_game& game, double epsilon,
                                  std::span<const double> x, double tol) {
  return detail::certify_on(prune(build_dag(game)), epsilon, x, tol);
}

inline feasibility_report certify(const vector_voting_game& game, double epsilon,
                                  std::span<const double> x, double tol) {
  return detail::certify_on(prune(build_vector_dag(game)), epsilon, x, tol);
}

/// Whether x equals w / W_+ coordinatewise within tol.
inline bool proportionality_check(const weighted_voting_game& game, std::span<const double> x,
                                  double tol = 1e-8) {
  if (x.size() != game.player_count()) {
    throw error(error_code::dimension_mismatch, "payoff vector length differs from player count");
  }
  const double total = static_cast<double>(game.total_weight());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - static_cast<double>(game.weight(i)) / total) > tol) return false;
  }
  return true;
}

inline std::vector<double> proportional_payoff(const weighted_voting_game& game) {
  std::vector<double> x(game.player_count());
  const double total = static_cast<double>(game.total_weight());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(game.weight(i)) / total;
  return x;
}

struct bruteforce_result {
  least_core_result least_core;
  std::vector<coalition> minimal_winning;
  /// True when the value came from the rational solver.
  bool exact = false;
};

/// Least core from the explicit LP over all minimal winning coalitions. The
/// rational solver is used whenever the model fits its cap; the tight
/// coalition is picked by scanning the enumerated family.
template <class Game>
bruteforce_result least_core_bruteforce(const Game& game, const exact_options& exact = {}) {
  require_valid(game);
  detail::require_enumerable(game.player_count(), max_enumeration_players);
  bruteforce_result out;
  out.minimal_winning = enumerate_minimal_winning(game);
  const auto model = build_coalition_lp(game.player_count(), out.minimal_winning);
  const bool fits = model.variable_count() * std::max<std::size_t>(model.constraint_count(), 1) <=
                    exact.cell_cap;
  const auto sol = fits ? solve_exact(model, exact) : solve(model);
  if (sol.status != solve_status::optimal) {
    throw solver_error(error_code::not_optimal,
                       "explicit LP status " + std::string(to_string(sol.status)));
  }
  out.exact = fits;

  auto& lc = out.least_core;
  const auto n = game.player_count();
  lc.epsilon_star = sol.objective;
  lc.exact_epsilon = sol.exact_objective;
  lc.payoff.assign(sol.point.begin() + 1, sol.point.begin() + 1 + static_cast<std::ptrdiff_t>(n));
  if (!sol.exact_point.empty()) {
    lc.exact_payoff.assign(sol.exact_point.begin() + 1,
                           sol.exact_point.begin() + 1 + static_cast<std::ptrdiff_t>(n));
  }
  lc.min_winning_payoff = std::numeric_limits<double>::infinity();
  for (const auto& s : out.minimal_winning) {
    const double p = coalition_payoff(lc.payoff, s);
    if (p < lc.min_winning_payoff) {
      lc.min_winning_payoff = p;
      lc.tight_witness = s;
    }
  }
  double sum = 0.0, lowest = 0.0;
  for (double v : lc.payoff) {
    sum += v;
    lowest = std::min(lowest, v);
  }
  auto& diag = lc.diagnostics;
  diag.sum_residual = std::abs(sum - 1.0);
  diag.negativity = std::max(0.0, -lowest);
  diag.coalition_gap = (1.0 - lc.epsilon_star) - lc.min_winning_payoff;
  diag.primal_violation = sol.primal_violation;
  diag.rows = model.constraint_count();
  diag.columns = model.variable_count();
  diag.nonzeros = model.nonzero_count();
  diag.iterations = sol.iterations;
  diag.used_bland = sol.used_bland;
  diag.solve_seconds = sol.seconds;
  return out;
}

}  // namespace leastcore

#endif  // LEASTCORE_ORACLE_HPP
