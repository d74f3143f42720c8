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

#ifndef LEASTCORE_LEAST_CORE_HPP
#define LEASTCORE_LEAST_CORE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "leastcore/coalition.hpp"
#include "leastcore/dag.hpp"
#include "leastcore/error.hpp"
#include "leastcore/formulations.hpp"
#include "leastcore/games.hpp"
#include "leastcore/lp_model.hpp"
#include "leastcore/simplex.hpp"

namespace leastcore {

struct least_core_diagnostics {
  /// |sum x - 1|.
  double sum_residual = 0.0;
  /// max(0, -min x_i).
  double negativity = 0.0;
  /// (1 - eps*) - min winning payoff; positive means some winning coalition
  /// receives less than 1 - eps*.
  double coalition_gap = 0.0;
  double primal_violation = 0.0;
  double dual_violation = 0.0;
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::size_t nonzeros = 0;
  std::size_t iterations = 0;
  std::size_t phase_one_iterations = 0;
  bool used_bland = false;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct least_core_result {
  double epsilon_star = 0.0;
  std::vector<double> payoff;
  /// A winning coalition whose payoff is minimal at `payoff`; at an optimum
  /// it receives 1 - eps*.
  coalition tight_witness;
  double min_winning_payoff = 0.0;
  std::optional<rational_value> exact_epsilon;
  std::vector<rational_value> exact_payoff;
  least_core_diagnostics diagnostics;
};

/// Reads eps* and the payoff vector of an optimal solution of a model built
/// by build_p2 or build_p1, then evaluates the payoff on the game's graph to
/// produce a tight coalition and feasibility residuals.
inline least_core_result extract_least_core(const lp_model& model, const lp_solution& sol,
                                            const layered_dag& dag) {
  if (sol.status != solve_status::optimal || !sol.has_point()) {
    throw solver_error(error_code::not_optimal,
                       "solver status is " + std::string(to_string(sol.status)));
  }
  const auto n = dag.player_count();
  const auto eps = model.variables_with_role(role_kind::epsilon);
  if (eps.size() != 1) {
    throw error(error_code::role_metadata_missing, "model has no unique epsilon variable");
  }
  std::vector<std::size_t> column(n, model.variable_count());
  for (auto j : model.variables_with_role(role_kind::payoff)) {
    const auto player = model.variable(j).role.player;
    if (player < n) column[player] = j;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (column[i] == model.variable_count()) {
      throw error(error_code::role_metadata_missing,
                  "no payoff variable for player " + std::to_string(i + 1));
    }
  }

  least_core_result result;
  result.epsilon_star = sol.objective;
  result.exact_epsilon = sol.exact_objective;
  result.payoff.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.payoff[i] = sol.point[column[i]];
    if (!sol.exact_point.empty()) result.exact_payoff.push_back(sol.exact_point[column[i]]);
  }

  const auto path = min_winning_payoff(dag, result.payoff);
  result.tight_witness = path.witness;
  result.min_winning_payoff = path.value;

  auto& diag = result.diagnostics;
  double sum = 0.0, lowest = 0.0;
  for (double v : result.payoff) {
    sum += v;
    lowest = std::min(lowest, v);
  }
  diag.sum_residual = std::abs(sum - 1.0);
  diag.negativity = std::max(0.0, -lowest);
  diag.coalition_gap = (1.0 - result.epsilon_star) - path.value;
  diag.primal_violation = sol.primal_violation;
  diag.dual_violation = sol.dual_violation;
  diag.rows = model.constraint_count();
  diag.columns = model.variable_count();
  diag.nonzeros = model.nonzero_count();
  diag.iterations = sol.iterations;
  diag.phase_one_iterations = sol.phase_one_iterations;
  diag.used_bland = sol.used_bland;
  diag.solve_seconds = sol.seconds;
  return result;
}

inline least_core_result extract_least_core(const lp_model& model, const lp_solution& sol,
                                            const weighted_voting_game& game) {
  return extract_least_core(model, sol, prune(build_dag(game)));
}

inline least_core_result extract_least_core(const lp_model& model, const lp_solution& sol,
                                            const vector_voting_game& game) {
  return extract_least_core(model, sol, prune(build_vector_dag(game)));
}

struct pipeline_options {
  bool prune = true;
  dag_options dag;
  solver_options solver;
};

/// Builds the graph, the P2 model, solves it and extracts the result.
inline least_core_result solve_least_core(const layered_dag& graph,
                                          const pipeline_options& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const layered_dag dag = opts.prune ? prune(graph) : graph;
  const auto model = build_p2(dag);
  const double build =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto sol = solve(model, opts.solver);
  auto result = extract_least_core(model, sol, dag);
  result.diagnostics.build_seconds = build;
  return result;
}

namespace detail {

template <class Game, class Builder>
least_core_result solve_game(const Game& game, const pipeline_options& opts, Builder&& builder) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dag = builder(game, opts.dag);
  const double graph_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto result = solve_least_core(dag, opts);
  result.diagnostics.build_seconds += graph_seconds;
  return result;
}

}  // namespace detail

/// As above; build_seconds covers graph construction as well.
inline least_core_result solve_least_core(const weighted_voting_game& game,
                                          const pipeline_options& opts = {}) {
  return detail::solve_game(game, opts, [](const auto& g, const dag_options& o) { return build_dag(g, o); });
}

inline least_core_result solve_least_core(const vector_voting_game& game,
                                          const pipeline_options& opts = {}) {
  return detail::solve_game(game, opts,
                            [](const auto& g, const dag_options& o) { return build_vector_dag(g, o); });
}

}  // namespace leastcore

#endif  // LEASTCORE_LEAST_CORE_HPP
