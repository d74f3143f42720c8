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

#ifndef LEASTCORE_FORMULATIONS_HPP
#define LEASTCORE_FORMULATIONS_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "leastcore/coalition.hpp"
#include "leastcore/dag.hpp"
#include "leastcore/enumeration.hpp"
#include "leastcore/error.hpp"
#include "leastcore/lp_model.hpp"

namespace leastcore {

/// The pseudo-polynomial least-core LP on a layered graph:
///
///   min  eps
///   s.t. y_T - y(s) + eps >= 1
///        y(v) - y(u)       <= 0     for every skip arc (u, v)
///        y(v) - y(u) - x_i <= 0     for every take arc (u, v) of player i
///        y(v) - y_T         = 0     for every target vertex v
///        sum_i x_i          = 1
///        y(s)               = 0
///        x >= 0;  eps, y_T, y free.
///
/// The y(v) are shortest-path potentials under arc lengths x, so y_T - y(s)
/// is at most the cheapest winning coalition's payoff. Pinning y(s) removes
/// the translation freedom of the potentials. Rows appear in the order
/// listed, arcs grouped by player.
inline lp_model build_p2(const layered_dag& dag) {
  lp_model model;
  const auto n = dag.player_count();
  const auto eps = model.add_variable("epsilon", -infinity, infinity, {role_kind::epsilon});
  const auto y_t = model.add_variable("yT", -infinity, infinity, {role_kind::y_terminal});

  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> column(dag.grid_vertex_count(), none);
  for (auto v : dag.vertices()) {
    variable_role role{role_kind::y_vertex, v, 0, 0};
    column[v] = static_cast<std::uint32_t>(
        model.add_variable("y(" + dag.vertex_label(v) + ")", -infinity, infinity, role));
  }
  std::vector<std::size_t> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    variable_role role{role_kind::payoff, 0, 0, i};
    x[i] = model.add_variable("x(" + std::to_string(i + 1) + ")", 0.0, infinity, role);
  }
  const std::size_t ys = column[dag.source()];

  model.add_constraint("cut", {{y_t, 1.0}, {ys, -1.0}, {eps, 1.0}}, relation::greater_equal, 1.0);
  dag.for_each_arc_in_group(0, [&](const layered_dag::arc& a) {
    model.add_constraint("skip(" + dag.vertex_label(a.head) + ")",
                         {{column[a.head], 1.0}, {column[a.tail], -1.0}}, relation::less_equal, 0.0);
  });
  for (std::size_t i = 1; i <= n; ++i) {
    dag.for_each_arc_in_group(i, [&](const layered_dag::arc& a) {
      model.add_constraint("take(" + dag.vertex_label(a.head) + ")",
                           {{column[a.head], 1.0}, {column[a.tail], -1.0}, {x[i - 1], -1.0}},
                           relation::less_equal, 0.0);
    });
  }
  for (auto v : dag.targets()) {
    model.add_constraint("target(" + dag.vertex_label(v) + ")", {{column[v], 1.0}, {y_t, -1.0}},
                         relation::equal, 0.0);
  }
  std::vector<lp_term> budget;
  for (auto j : x) budget.push_back({j, 1.0});
  model.add_constraint("budget", budget, relation::equal, 1.0);
  model.add_constraint("anchor", {{ys, 1.0}}, relation::equal, 0.0);
  model.set_objective(objective_sense::minimize, {{eps, 1.0}});
  return model;
}

/// The explicit least-core LP over a given family of coalitions:
///
///   min eps  s.t.  x(S) + eps >= 1 for S in the family,  sum x = 1,  x >= 0.
inline lp_model build_coalition_lp(std::size_t player_count, std::span<const coalition> family) {
  lp_model model;
  const auto eps = model.add_variable("epsilon", -infinity, infinity, {role_kind::epsilon});
  std::vector<std::size_t> x(player_count);
  for (std::size_t i = 0; i < player_count; ++i) {
    variable_role role{role_kind::payoff, 0, 0, i};
    x[i] = model.add_variable("x(" + std::to_string(i + 1) + ")", 0.0, infinity, role);
  }
  for (const auto& s : family) {
    std::vector<lp_term> terms;
    std::string name = "win(";
    bool first = true;
    for (auto i : s.members()) {
      terms.push_back({x[i], 1.0});
      name += (first ? "" : ",") + std::to_string(i + 1);
      first = false;
    }
    terms.push_back({eps, 1.0});
    model.add_constraint(name + ")", terms, relation::greater_equal, 1.0);
  }
  std::vector<lp_term> budget;
  for (auto j : x) budget.push_back({j, 1.0});
  model.add_constraint("budget", budget, relation::equal, 1.0);
  model.set_objective(objective_sense::minimize, {{eps, 1.0}});
  return model;
}

/// The exponential-size least-core LP with one row per minimal winning
/// coalition (rows for non-minimal winners are implied since x >= 0).
template <class Game>
lp_model build_p1(const Game& game, std::size_t max_players = max_enumeration_players) {
  detail::require_enumerable(game.player_count(), max_players);
  const auto family = enumerate_minimal_winning(game);
  return build_coalition_lp(game.player_count(), family);
}

/// Unit-flow shortest-path LP on the graph extended by an artificial
/// terminal t that every target vertex feeds through a zero-length arc.
/// Take arcs of player i cost x_i; its optimum equals min_winning_payoff.
inline lp_model build_flow_lp(const layered_dag& dag, std::span<const double> x) {
  const auto n = dag.player_count();
  if (x.size() != n) {
    throw error(error_code::dimension_mismatch, "payoff vector has " + std::to_string(x.size()) +
                                                    " entries, expected " + std::to_string(n));
  }
  lp_model model;
  struct flow_arc {
    std::size_t var, tail, head;  // head == npos: terminal
  };
  std::vector<flow_arc> arcs;
  std::vector<lp_term> objective;
  dag.for_each_arc([&](const layered_dag::arc& a) {
    const std::string kind = a.player == 0 ? "skip(" : "take(";
    variable_role role{role_kind::flow, a.tail, a.head, a.player};
    const auto var = model.add_variable(kind + dag.vertex_label(a.head) + ")", 0.0, infinity, role);
    arcs.push_back({var, a.tail, a.head});
    if (a.player != 0 && x[a.player - 1] != 0.0) objective.push_back({var, x[a.player - 1]});
  });
  for (auto v : dag.targets()) {
    variable_role role{role_kind::flow, v, layered_dag::npos, 0};
    const auto var = model.add_variable("sink(" + dag.vertex_label(v) + ")", 0.0, infinity, role);
    arcs.push_back({var, v, layered_dag::npos});
  }

  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> row_of(dag.grid_vertex_count(), none);
  const auto vertices = dag.vertices();
  for (std::size_t r = 0; r < vertices.size(); ++r) row_of[vertices[r]] = static_cast<std::uint32_t>(r);
  std::vector<std::vector<lp_term>> rows(vertices.size() + 1);
  const std::size_t terminal_row = vertices.size();
  for (const auto& a : arcs) {
    rows[row_of[a.tail]].push_back({a.var, 1.0});
    rows[a.head == layered_dag::npos ? terminal_row : row_of[a.head]].push_back({a.var, -1.0});
  }
  for (std::size_t r = 0; r < vertices.size(); ++r) {
    const double supply = vertices[r] == dag.source() ? 1.0 : 0.0;
    model.add_constraint("node(" + dag.vertex_label(vertices[r]) + ")", rows[r], relation::equal,
                         supply);
  }
  model.add_constraint("node(t)", rows[terminal_row], relation::equal, -1.0);
  model.set_objective(objective_sense::minimize, std::move(objective));
  return model;
}

}  // namespace leastcore

#endif  // LEASTCORE_FORMULATIONS_HPP
