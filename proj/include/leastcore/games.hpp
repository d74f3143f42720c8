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

#ifndef LEASTCORE_GAMES_HPP
#define LEASTCORE_GAMES_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "leastcore/coalition.hpp"
#include "leastcore/error.hpp"

namespace leastcore {

/// The weighted voting game [q; w_1, ..., w_n]: a coalition wins iff the sum
/// of its members' weights reaches the quota.
///
/// Values are immutable. Construction does not validate; call validate() or
/// require_valid() before handing a game to the algorithms (they do so
/// themselves at their entry points).
class weighted_voting_game {
 public:
  weighted_voting_game() = default;
  weighted_voting_game(std::int64_t quota, std::vector<std::int64_t> weights)
      : quota_(quota), weights_(std::move(weights)) {
    for (auto w : weights_) {
      if (__builtin_add_overflow(total_, w, &total_)) {
        total_ = std::numeric_limits<std::int64_t>::max();
        overflow_ = true;
        break;
      }
    }
  }

  std::int64_t quota() const noexcept { return quota_; }
  const std::vector<std::int64_t>& weights() const noexcept { return weights_; }
  std::int64_t weight(std::size_t player) const { return weights_.at(player); }
  std::size_t player_count() const noexcept { return weights_.size(); }

  /// W_+, the sum of all weights. Saturates at INT64_MAX on overflow.
  std::int64_t total_weight() const noexcept { return total_; }
  bool total_overflowed() const noexcept { return overflow_; }

  friend bool operator==(const weighted_voting_game& a, const weighted_voting_game& b) {
    return a.quota_ == b.quota_ && a.weights_ == b.weights_;
  }

 private:
  std::int64_t quota_ = 0;
  std::vector<std::int64_t> weights_;
  std::int64_t total_ = 0;
  bool overflow_ = false;
};

enum class combine_mode { intersection, union_ };

inline std::string_view to_string(combine_mode mode) {
  return mode == combine_mode::intersection ? "intersection" : "union";
}

/// k weighted voting games on one player set, combined by intersection
/// (win every rule) or union (win some rule).
class vector_voting_game {
 public:
  vector_voting_game() = default;
  vector_voting_game(std::vector<weighted_voting_game> rules, combine_mode combine)
      : rules_(std::move(rules)), combine_(combine) {}

  const std::vector<weighted_voting_game>& rules() const noexcept { return rules_; }
  const weighted_voting_game& rule(std::size_t k) const { return rules_.at(k); }
  std::size_t rule_count() const noexcept { return rules_.size(); }
  combine_mode combine() const noexcept { return combine_; }
  std::size_t player_count() const noexcept {
    return rules_.empty() ? 0 : rules_.front().player_count();
  }

  friend bool operator==(const vector_voting_game&, const vector_voting_game&) = default;

 private:
  std::vector<weighted_voting_game> rules_;
  combine_mode combine_ = combine_mode::intersection;
};

// ---------------------------------------------------------------------------
// Validation

/// Returns the first violated invariant, or nullopt when the game is valid.
inline std::optional<error_code> validate(const weighted_voting_game& game) {
  if (game.player_count() == 0) return error_code::empty_player_set;
  for (auto w : game.weights()) {
    if (w < 0) return error_code::negative_weight;
  }
  if (game.quota() <= 0 || game.total_overflowed() || game.quota() > game.total_weight()) {
    return error_code::quota_out_of_range;
  }
  return std::nullopt;
}

inline std::optional<error_code> validate(const vector_voting_game& game) {
  if (game.rule_count() == 0) return error_code::empty_rule_set;
  for (const auto& rule : game.rules()) {
    if (auto status = validate(rule)) return status;
    if (rule.player_count() != game.player_count()) return error_code::player_count_mismatch;
  }
  return std::nullopt;
}

namespace detail {

inline std::string describe(const weighted_voting_game& game, error_code code) {
  switch (code) {
    case error_code::empty_player_set:
      return "the game has no players";
    case error_code::negative_weight: {
      for (std::size_t i = 0; i < game.player_count(); ++i) {
        if (game.weight(i) < 0) {
          return "player " + std::to_string(i + 1) + " has negative weight " +
                 std::to_string(game.weight(i));
        }
      }
      return "negative weight";
    }
    case error_code::quota_out_of_range:
      if (game.total_overflowed()) return "total weight overflows 64 bits";
      return "quota " + std::to_string(game.quota()) + " is outside [1, " +
             std::to_string(game.total_weight()) + "]";
    default:
      return std::string(to_string(code));
  }
}

}  // namespace detail

inline void require_valid(const weighted_voting_game& game) {
  if (auto status = validate(game)) {
    throw validation_error(*status, detail::describe(game, *status));
  }
}

inline void require_valid(const vector_voting_game& game) {
  if (game.rule_count() == 0) {
    throw validation_error(error_code::empty_rule_set, "a vector game needs at least one rule");
  }
  for (std::size_t k = 0; k < game.rule_count(); ++k) {
    const auto& rule = game.rule(k);
    if (auto status = validate(rule)) {
      throw validation_error(*status, "rule " + std::to_string(k + 1) + ": " +
                                          detail::describe(rule, *status));
    }
    if (rule.player_count() != game.player_count()) {
      throw validation_error(error_code::player_count_mismatch,
                             "rule " + std::to_string(k + 1) + " has " +
                                 std::to_string(rule.player_count()) + " players, expected " +
                                 std::to_string(game.player_count()));
    }
  }
}

// ---------------------------------------------------------------------------
// Characteristic function

inline std::int64_t coalition_weight(const weighted_voting_game& game, const coalition& s) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    if (s.contains(i)) sum += game.weight(i);
  }
  return sum;
}

/// v(S) for a weighted voting game.
inline bool is_winning(const weighted_voting_game& game, const coalition& s) {
  return coalition_weight(game, s) >= game.quota();
}

/// v_and(S) or v_or(S), depending on the combine mode.
inline bool evaluate_vector(const vector_voting_game& game, const coalition& s) {
  if (game.combine() == combine_mode::intersection) {
    return std::all_of(game.rules().begin(), game.rules().end(),
                       [&](const auto& rule) { return is_winning(rule, s); });
  }
  return std::any_of(game.rules().begin(), game.rules().end(),
                     [&](const auto& rule) { return is_winning(rule, s); });
}

inline bool is_winning(const vector_voting_game& game, const coalition& s) {
  return evaluate_vector(game, s);
}

/// Sum of x_i over the members of S.
inline double coalition_payoff(std::span<const double> x, const coalition& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size() && i < s.player_count(); ++i) {
    if (s.contains(i)) sum += x[i];
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Parsing and formatting

using any_game = std::variant<weighted_voting_game, vector_voting_game>;

struct parse_options {
  /// Upper bound on W_+ per rule. The LP grows as Theta(n W_+).
  std::int64_t total_weight_cap = 1'000'000;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::int64_t parse_integer(std::string_view token) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range) {
    throw syntax_error("integer '" + std::string(token) + "' does not fit in 64 bits");
  }
  if (ec != std::errc() || ptr != last || first == last) {
    throw syntax_error("'" + std::string(token) + "' is not an integer");
  }
  return value;
}

inline std::int64_t json_integer(const nlohmann::json& value, const char* what) {
  if (value.is_number_unsigned()) {
    auto u = value.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw syntax_error(std::string(what) + " does not fit in 64 bits");
    }
    return static_cast<std::int64_t>(u);
  }
  if (!value.is_number_integer()) {
    throw syntax_error(std::string(what) + " must be an integer");
  }
  return value.get<std::int64_t>();
}

inline weighted_voting_game json_rule(const nlohmann::json& obj) {
  if (!obj.is_object()) throw syntax_error("a game must be a JSON object");
  if (!obj.contains("quota")) throw syntax_error("missing \"quota\"");
  if (!obj.contains("weights") || !obj["weights"].is_array()) {
    throw syntax_error("missing \"weights\" array");
  }
  std::vector<std::int64_t> weights;
  for (const auto& w : obj["weights"]) weights.push_back(json_integer(w, "weight"));
  return {json_integer(obj["quota"], "quota"), std::move(weights)};
}

inline void check_cap(const weighted_voting_game& game, const parse_options& opts) {
  if (game.total_weight() > opts.total_weight_cap) {
    throw validation_error(error_code::total_weight_cap_exceeded,
                           "total weight " + std::to_string(game.total_weight()) +
                               " exceeds the cap " + std::to_string(opts.total_weight_cap));
  }
}

inline any_game parse_json_game(std::string_view text, const parse_options& opts) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw syntax_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw syntax_error("top-level JSON value must be an object");
  if (doc.contains("rules")) {
    if (!doc["rules"].is_array()) throw syntax_error("\"rules\" must be an array");
    if (!doc.contains("combine") || !doc["combine"].is_string()) {
      throw syntax_error("missing \"combine\" (\"intersection\" or \"union\")");
    }
    auto mode_name = doc["combine"].get<std::string>();
    combine_mode mode;
    if (mode_name == "intersection") {
      mode = combine_mode::intersection;
    } else if (mode_name == "union") {
      mode = combine_mode::union_;
    } else {
      throw syntax_error("unknown combine mode \"" + mode_name + "\"");
    }
    std::vector<weighted_voting_game> rules;
    for (const auto& r : doc["rules"]) rules.push_back(json_rule(r));
    vector_voting_game game(std::move(rules), mode);
    require_valid(game);
    for (const auto& rule : game.rules()) check_cap(rule, opts);
    return game;
  }
  auto game = json_rule(doc);
  require_valid(game);
  check_cap(game, opts);
  return game;
}

/// "q; w1 w2 ... wn". Blank lines and lines starting with '#' are ignored.
inline weighted_voting_game parse_text_game(std::string_view text, const parse_options& opts) {
  std::string line;
  std::size_t pos = 0;
  bool found = false;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto candidate = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (candidate.empty() || candidate.front() == '#') continue;
    if (found) throw syntax_error("expected a single game line, found more");
    line = std::string(candidate);
    found = true;
  }
  if (!found) throw syntax_error("empty input");
  auto semi = line.find(';');
  if (semi == std::string::npos) throw syntax_error("expected ';' after the quota");
  auto quota = parse_integer(trim(std::string_view(line).substr(0, semi)));
  std::vector<std::int64_t> weights;
  std::string_view rest = std::string_view(line).substr(semi + 1);
  while (true) {
    rest = trim(rest);
    if (rest.empty()) break;
    std::size_t len = 0;
    while (len < rest.size() && !std::isspace(static_cast<unsigned char>(rest[len])) &&
           rest[len] != ',') {
      ++len;
    }
    if (len == 0) throw syntax_error("unexpected ','");
    weights.push_back(parse_integer(rest.substr(0, len)));
    rest.remove_prefix(len);
    rest = trim(rest);
    if (!rest.empty() && rest.front() == ',') rest.remove_prefix(1);
  }
  weighted_voting_game game(quota, std::move(weights));
  require_valid(game);
  check_cap(game, opts);
  return game;
}

}  // namespace detail

/// Parses either the one-line text format or the JSON format (detected by a
/// leading '{'). The result is validated.
inline any_game parse_game(std::string_view text, const parse_options& opts = {}) {
  auto body = detail::trim(text);
  if (!body.empty() && body.front() == '{') return detail::parse_json_game(body, opts);
  return detail::parse_text_game(text, opts);
}

inline std::string to_text(const weighted_voting_game& game) {
  std::string out = std::to_string(game.quota()) + ";";
  for (auto w : game.weights()) out += " " + std::to_string(w);
  return out;
}

inline nlohmann::json to_json(const weighted_voting_game& game) {
  return {{"quota", game.quota()}, {"weights", game.weights()}};
}

inline nlohmann::json to_json(const vector_voting_game& game) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : game.rules()) rules.push_back(to_json(r));
  return {{"rules", rules}, {"combine", std::string(to_string(game.combine()))}};
}

}  // namespace leastcore

#endif  // LEASTCORE_GAMES_HPP
