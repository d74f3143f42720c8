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

#ifndef LEASTCORE_ENUMERATION_HPP
#define LEASTCORE_ENUMERATION_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "leastcore/coalition.hpp"
#include "leastcore/error.hpp"
#include "leastcore/games.hpp"

namespace leastcore {

inline constexpr std::size_t max_enumeration_players = 20;

namespace detail {

inline void require_enumerable(std::size_t n, std::size_t max_n) {
  if (n > max_n) {
    throw size_error(error_code::too_many_players,
                     std::to_string(n) + " players exceed the enumeration limit of " +
                         std::to_string(max_n));
  }
}

/// Weight of every subset mask for one rule, by lowest-bit recurrence.
inline std::vector<std::int64_t> subset_sums(const weighted_voting_game& game) {
  const std::size_t n = game.player_count();
  std::vector<std::int64_t> sums(std::size_t{1} << n, 0);
  for (std::uint64_t mask = 1; mask < sums.size(); ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    sums[mask] = sums[mask & (mask - 1)] + game.weight(low);
  }
  return sums;
}

}  // namespace detail

/// v(S) for every S, indexed by bit mask (bit i = player i+1).
inline std::vector<char> winning_table(const weighted_voting_game& game) {
  require_valid(game);
  detail::require_enumerable(game.player_count(), max_enumeration_players);
  const auto sums = detail::subset_sums(game);
  std::vector<char> win(sums.size());
  for (std::size_t mask = 0; mask < sums.size(); ++mask) win[mask] = sums[mask] >= game.quota();
  return win;
}

inline std::vector<char> winning_table(const vector_voting_game& game) {
  require_valid(game);
  detail::require_enumerable(game.player_count(), max_enumeration_players);
  const std::size_t size = std::size_t{1} << game.player_count();
  const bool all = game.combine() == combine_mode::intersection;
  std::vector<char> win(size, all ? 1 : 0);
  for (const auto& rule : game.rules()) {
    const auto sums = detail::subset_sums(rule);
    for (std::size_t mask = 0; mask < size; ++mask) {
      const bool ok = sums[mask] >= rule.quota();
      win[mask] = all ? (win[mask] && ok) : (win[mask] || ok);
    }
  }
  return win;
}

/// Winning coalitions none of whose proper subsets win, ordered by size and
/// then lexicographically by member list.
template <class Game>
std::vector<coalition> enumerate_minimal_winning(const Game& game) {
  const auto win = winning_table(game);
  const std::size_t n = game.player_count();
  std::vector<std::uint64_t> masks;
  for (std::uint64_t mask = 0; mask < win.size(); ++mask) {
    if (!win[mask]) continue;
    bool minimal = true;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      if (win[mask & ~(rest & (~rest + 1))]) {
        minimal = false;
        break;
      }
    }
    if (minimal) masks.push_back(mask);
  }
  // For equal sizes, lexicographic order of the sorted member lists is
  // decided by the lowest player in which the two coalitions differ.
  std::sort(masks.begin(), masks.end(), [&](std::uint64_t a, std::uint64_t b) {
    const int ca = std::popcount(a), cb = std::popcount(b);
    if (ca != cb) return ca < cb;
    const std::uint64_t diff = a ^ b;
    const auto low = std::countr_zero(diff);
    return ((a >> low) & 1U) != 0;
  });
  std::vector<coalition> out;
  out.reserve(masks.size());
  for (auto mask : masks) out.push_back(coalition::from_mask(n, mask));
  return out;
}

/// Number of winning coalitions, by enumeration.
template <class Game>
std::uint64_t count_winning(const Game& game) {
  const auto win = winning_table(game);
  return static_cast<std::uint64_t>(std::count(win.begin(), win.end(), 1));
}

}  // namespace leastcore

#endif  // LEASTCORE_ENUMERATION_HPP
