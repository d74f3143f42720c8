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

#ifndef LEASTCORE_DAG_HPP
#define LEASTCORE_DAG_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "leastcore/coalition.hpp"
#include "leastcore/error.hpp"
#include "leastcore/games.hpp"

namespace leastcore {

struct dag_options {
  /// Maximum number of grid vertices (n+1) * prod(W_+^(k) + 1).
  std::int64_t vertex_cap = 20'000'000;
};

/// The layered acyclic digraph whose source-to-target paths are in bijection
/// with the winning coalitions of a (vector) weighted voting game.
///
/// Vertex (i, a) lives in layer i in [0, n] at weight coordinate a in
/// [0, W^(1)] x ... x [0, W^(k)]. Layer i-1 connects to layer i by a
/// zero-length "skip" arc (same coordinate, player i excluded) and, when it
/// stays inside the grid, a "take" arc that shifts the coordinate by player
/// i's weight vector and has length x_i.
///
/// Vertices are not materialized: an id is layer * layer_size() + flat(a),
/// with the first weight coordinate varying fastest. Pruning only records a
/// liveness mask over that grid.
class layered_dag {
 public:
  using vertex_id = std::size_t;

  /// An arc of the graph. `player` is 0 for a skip arc and the 1-based player
  /// index for a take arc.
  struct arc {
    vertex_id tail;
    vertex_id head;
    std::size_t player;
  };

  std::size_t player_count() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return quotas_.size(); }
  combine_mode combine() const noexcept { return combine_; }
  std::size_t layer_size() const noexcept { return layer_size_; }
  std::size_t grid_vertex_count() const noexcept { return (n_ + 1) * layer_size_; }
  const std::vector<std::int64_t>& totals() const noexcept { return totals_; }
  const std::vector<std::int64_t>& quotas() const noexcept { return quotas_; }

  /// Weight vector of 0-based player i (one entry per rule).
  std::span<const std::int64_t> shift(std::size_t player) const {
    return {shifts_.data() + player * dimension(), dimension()};
  }

  /// flat(shift(player)); adding it to a tail coordinate gives the take-arc
  /// head whenever that head is inside the grid.
  std::size_t shift_flat(std::size_t player) const { return shift_flat_[player]; }

  bool is_pruned() const noexcept { return !live_.empty(); }

  vertex_id source() const noexcept { return 0; }
  vertex_id id(std::size_t layer, std::size_t flat) const noexcept {
    return layer * layer_size_ + flat;
  }
  std::size_t layer_of(vertex_id v) const noexcept { return v / layer_size_; }
  std::size_t flat_of(vertex_id v) const noexcept { return v % layer_size_; }

  std::vector<std::int64_t> coordinates(std::size_t flat) const {
    std::vector<std::int64_t> alpha(dimension());
    for (std::size_t k = 0; k < dimension(); ++k) {
      alpha[k] = static_cast<std::int64_t>(flat % radix_[k]);
      flat /= radix_[k];
    }
    return alpha;
  }

  std::size_t flat_index(std::span<const std::int64_t> alpha) const {
    std::size_t flat = 0;
    for (std::size_t k = dimension(); k-- > 0;) {
      flat = flat * radix_[k] + static_cast<std::size_t>(alpha[k]);
    }
    return flat;
  }

  bool is_live(vertex_id v) const { return live_.empty() || live_[v] != 0; }

  /// Whether a layer-n coordinate belongs to the target set T (ignores
  /// liveness).
  bool is_target_coordinate(std::size_t flat) const {
    const bool all = combine_ == combine_mode::intersection;
    for (std::size_t k = 0; k < dimension(); ++k) {
      const auto a = static_cast<std::int64_t>(flat % radix_[k]);
      flat /= radix_[k];
      const bool ok = a >= quotas_[k];
      if (all && !ok) return false;
      if (!all && ok) return true;
    }
    return all;
  }

  bool is_target(vertex_id v) const {
    return layer_of(v) == n_ && is_live(v) && is_target_coordinate(flat_of(v));
  }

  std::vector<vertex_id> targets() const {
    std::vector<vertex_id> out;
    for (std::size_t f = 0; f < layer_size_; ++f) {
      if (is_target(id(n_, f))) out.push_back(id(n_, f));
    }
    return out;
  }

  /// Live vertices in id order (layer-major).
  std::vector<vertex_id> vertices() const {
    std::vector<vertex_id> out;
    out.reserve(vertex_count());
    for (vertex_id v = 0; v < grid_vertex_count(); ++v) {
      if (is_live(v)) out.push_back(v);
    }
    return out;
  }

  std::size_t vertex_count() const {
    if (live_.empty()) return grid_vertex_count();
    std::size_t count = 0;
    for (auto b : live_) count += b;
    return count;
  }

  /// Head of the take arc of `player` (1-based) leaving flat coordinate
  /// `flat`, or npos when it would leave the grid.
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t take_head_flat(std::size_t flat, std::size_t player) const {
    const auto w = shift(player - 1);
    std::size_t rest = flat;
    for (std::size_t k = 0; k < dimension(); ++k) {
      const auto a = static_cast<std::int64_t>(rest % radix_[k]);
      rest /= radix_[k];
      if (a + w[k] > totals_[k]) return npos;
    }
    return flat + shift_flat_[player - 1];
  }

  /// Visits the arcs of one group (0 = skip arcs, i = take arcs of player i)
  /// between live vertices, ordered by tail id.
  template <class Fn>
  void for_each_arc_in_group(std::size_t group, Fn&& fn) const {
    if (group == 0) {
      for (std::size_t layer = 1; layer <= n_; ++layer) {
        for (std::size_t f = 0; f < layer_size_; ++f) {
          const auto tail = id(layer - 1, f);
          const auto head = id(layer, f);
          if (is_live(tail) && is_live(head)) fn(arc{tail, head, 0});
        }
      }
      return;
    }
    for (std::size_t f = 0; f < layer_size_; ++f) {
      const auto tail = id(group - 1, f);
      if (!is_live(tail)) continue;
      const auto hf = take_head_flat(f, group);
      if (hf == npos) continue;
      const auto head = id(group, hf);
      if (is_live(head)) fn(arc{tail, head, group});
    }
  }

  /// All arcs, group by group (skip arcs first, then players 1..n).
  template <class Fn>
  void for_each_arc(Fn&& fn) const {
    for (std::size_t g = 0; g <= n_; ++g) for_each_arc_in_group(g, fn);
  }

  std::size_t arc_count(std::size_t group) const {
    std::size_t count = 0;
    for_each_arc_in_group(group, [&](const arc&) { ++count; });
    return count;
  }

  std::size_t arc_count() const {
    std::size_t count = 0;
    for (std::size_t g = 0; g <= n_; ++g) count += arc_count(g);
    return count;
  }

  /// "i,a1,...,ak".
  std::string vertex_label(vertex_id v) const {
    std::string out = std::to_string(layer_of(v));
    for (auto a : coordinates(flat_of(v))) out += "," + std::to_string(a);
    return out;
  }

 private:
  friend layered_dag build_vector_dag(const vector_voting_game&, const dag_options&);
  friend layered_dag prune(const layered_dag&);

  std::size_t n_ = 0;
  combine_mode combine_ = combine_mode::intersection;
  std::vector<std::int64_t> totals_;
  std::vector<std::int64_t> quotas_;
  std::vector<std::int64_t> shifts_;  // n x k, row-major
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> shift_flat_;
  std::size_t layer_size_ = 1;
  std::vector<std::uint8_t> live_;  // empty means every grid vertex is live
};

inline layered_dag build_vector_dag(const vector_voting_game& game, const dag_options& opts = {}) {
  require_valid(game);
  layered_dag dag;
  const auto n = game.player_count();
  const auto k = game.rule_count();
  dag.n_ = n;
  dag.combine_ = game.combine();
  std::int64_t grid = static_cast<std::int64_t>(n) + 1;
  for (const auto& rule : game.rules()) {
    dag.totals_.push_back(rule.total_weight());
    dag.quotas_.push_back(rule.quota());
    dag.radix_.push_back(static_cast<std::size_t>(rule.total_weight()) + 1);
    if (__builtin_mul_overflow(grid, rule.total_weight() + 1, &grid) || grid > opts.vertex_cap) {
      throw size_error(error_code::size_cap_exceeded,
                       "graph would exceed " + std::to_string(opts.vertex_cap) + " vertices");
    }
  }
  dag.layer_size_ = static_cast<std::size_t>(grid) / (n + 1);
  dag.shifts_.resize(n * k);
  dag.shift_flat_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t flat = 0;
    for (std::size_t r = k; r-- > 0;) {
      const auto w = game.rule(r).weight(i);
      dag.shifts_[i * k + r] = w;
      flat = flat * dag.radix_[r] + static_cast<std::size_t>(w);
    }
    dag.shift_flat_[i] = flat;
  }
  return dag;
}

inline layered_dag build_dag(const weighted_voting_game& game, const dag_options& opts = {}) {
  require_valid(game);
  return build_vector_dag(vector_voting_game({game}, combine_mode::intersection), opts);
}

/// Keeps only vertices that are reachable from the source and can reach the
/// target set. The set of source-to-target paths is unchanged.
inline layered_dag prune(const layered_dag& dag) {
  const auto n = dag.player_count();
  const auto size = dag.layer_size();
  std::vector<std::uint8_t> forward(dag.grid_vertex_count(), 0);
  std::vector<std::uint8_t> backward(dag.grid_vertex_count(), 0);
  forward[dag.source()] = dag.is_live(dag.source()) ? 1 : 0;
  for (std::size_t layer = 1; layer <= n; ++layer) {
    for (std::size_t f = 0; f < size; ++f) {
      const auto tail = dag.id(layer - 1, f);
      if (!forward[tail]) continue;
      const auto skip = dag.id(layer, f);
      if (dag.is_live(skip)) forward[skip] = 1;
      const auto hf = dag.take_head_flat(f, layer);
      if (hf != layered_dag::npos && dag.is_live(dag.id(layer, hf))) forward[dag.id(layer, hf)] = 1;
    }
  }
  for (std::size_t f = 0; f < size; ++f) {
    const auto v = dag.id(n, f);
    backward[v] = dag.is_target(v) ? 1 : 0;
  }
  for (std::size_t layer = n; layer >= 1; --layer) {
    for (std::size_t f = 0; f < size; ++f) {
      const auto tail = dag.id(layer - 1, f);
      if (!dag.is_live(tail)) continue;
      bool reach = backward[dag.id(layer, f)] != 0;
      if (!reach) {
        const auto hf = dag.take_head_flat(f, layer);
        reach = hf != layered_dag::npos && backward[dag.id(layer, hf)] != 0;
      }
      backward[tail] = reach ? 1 : 0;
    }
  }
  layered_dag out = dag;
  out.live_.assign(dag.grid_vertex_count(), 0);
  for (std::size_t v = 0; v < out.live_.size(); ++v) {
    out.live_[v] = static_cast<std::uint8_t>(forward[v] & backward[v]);
  }
  return out;
}

/// Number of source-to-target paths, saturating at UINT64_MAX.
inline std::uint64_t count_paths(const layered_dag& dag) {
  const auto n = dag.player_count();
  const auto size = dag.layer_size();
  constexpr auto max = std::numeric_limits<std::uint64_t>::max();
  auto add = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    return __builtin_add_overflow(a, b, &r) ? max : r;
  };
  std::vector<std::uint64_t> cur(size, 0), next(size, 0);
  if (dag.is_live(dag.source())) cur[0] = 1;
  for (std::size_t layer = 1; layer <= n; ++layer) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t f = 0; f < size; ++f) {
      if (cur[f] == 0) continue;
      if (dag.is_live(dag.id(layer, f))) next[f] = add(next[f], cur[f]);
      const auto hf = dag.take_head_flat(f, layer);
      if (hf != layered_dag::npos && dag.is_live(dag.id(layer, hf))) next[hf] = add(next[hf], cur[f]);
    }
    cur.swap(next);
  }
  std::uint64_t total = 0;
  for (std::size_t f = 0; f < size; ++f) {
    if (dag.is_target(dag.id(n, f))) total = add(total, cur[f]);
  }
  return total;
}

struct shortest_path_result {
  double value = 0.0;
  coalition witness;
};

/// Length of the shortest source-to-target path when take arcs of player i
/// have length x_i, i.e. the minimum payoff min_{S winning} x(S), together
/// with a coalition attaining it.
///
/// Single forward pass over the layers. On exact ties the skip arc wins, so
/// the witness leans towards fewer members. The graph is acyclic, so any
/// real x is accepted.
inline shortest_path_result min_winning_payoff(const layered_dag& dag, std::span<const double> x) {
  const auto n = dag.player_count();
  if (x.size() != n) {
    throw error(error_code::dimension_mismatch, "payoff vector has " + std::to_string(x.size()) +
                                                    " entries, expected " + std::to_string(n));
  }
  const auto size = dag.layer_size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cur(size, inf), next(size, inf);
  // took[id] == 1 when the best path into id uses the take arc.
  std::vector<std::uint8_t> took(dag.grid_vertex_count(), 0);
  if (dag.is_live(dag.source())) cur[0] = 0.0;
  for (std::size_t layer = 1; layer <= n; ++layer) {
    std::fill(next.begin(), next.end(), inf);
    const double len = x[layer - 1];
    for (std::size_t f = 0; f < size; ++f) {
      if (cur[f] == inf) continue;
      const auto skip = dag.id(layer, f);
      if (dag.is_live(skip) && cur[f] <= next[f]) {
        next[f] = cur[f];
        took[skip] = 0;
      }
      const auto hf = dag.take_head_flat(f, layer);
      if (hf == layered_dag::npos) continue;
      const auto take = dag.id(layer, hf);
      if (!dag.is_live(take)) continue;
      const double cand = cur[f] + len;
      if (cand < next[hf]) {
        next[hf] = cand;
        took[take] = 1;
      }
    }
    cur.swap(next);
  }
  shortest_path_result result{inf, coalition(n)};
  std::size_t best = layered_dag::npos;
  for (std::size_t f = 0; f < size; ++f) {
    if (dag.is_target(dag.id(n, f)) && cur[f] < result.value) {
      result.value = cur[f];
      best = f;
    }
  }
  if (best == layered_dag::npos) return result;
  std::size_t flat = best;
  for (std::size_t layer = n; layer >= 1; --layer) {
    if (took[dag.id(layer, flat)]) {
      result.witness.insert(layer - 1);
      flat -= dag.shift_flat(layer - 1);
    }
  }
  return result;
}

struct dot_options {
  std::size_t max_vertices = 10'000;
};

/// Graphviz rendering of the live graph. Vertices are labelled "i,a";
/// arcs carry the owning player or "skip".
inline std::string to_dot(const layered_dag& dag, const dot_options& opts = {}) {
  if (dag.vertex_count() > opts.max_vertices) {
    throw size_error(error_code::size_cap_exceeded,
                     "DOT export is limited to " + std::to_string(opts.max_vertices) + " vertices");
  }
  std::ostringstream out;
  out << "digraph gamma {\n  rankdir=LR;\n";
  for (auto v : dag.vertices()) {
    out << "  v" << v << " [label=\"" << dag.vertex_label(v) << "\"";
    if (v == dag.source()) out << ", shape=box";
    if (dag.is_target(v)) out << ", shape=doublecircle";
    out << "];\n";
  }
  dag.for_each_arc([&](const layered_dag::arc& a) {
    out << "  v" << a.tail << " -> v" << a.head << " [label=\"";
    if (a.player == 0) {
      out << "skip";
    } else {
      out << a.player;
    }
    out << "\"];\n";
  });
  out << "}\n";
  return out.str();
}

}  // namespace leastcore

#endif  // LEASTCORE_DAG_HPP
