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

#ifndef LEASTCORE_ERROR_HPP
#define LEASTCORE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace leastcore {

enum class error_code {
  // game validation
  quota_out_of_range,
  empty_player_set,
  negative_weight,
  empty_rule_set,
  player_count_mismatch,
  total_weight_cap_exceeded,
  // input parsing
  syntax_error,
  // size guards
  size_cap_exceeded,
  too_many_players,
  exact_mode_cap_exceeded,
  // evaluation
  dimension_mismatch,
  // results
  not_optimal,
  role_metadata_missing,
  numerical_breakdown,
  // statistics
  rank_deficient,
};

inline std::string_view to_string(error_code code) {
  switch (code) {
    case error_code::quota_out_of_range: return "QuotaOutOfRange";
    case error_code::empty_player_set: return "EmptyPlayerSet";
    case error_code::negative_weight: return "NegativeWeight";
    case error_code::empty_rule_set: return "EmptyRuleSet";
    case error_code::player_count_mismatch: return "PlayerCountMismatch";
    case error_code::total_weight_cap_exceeded: return "TotalWeightCapExceeded";
    case error_code::syntax_error: return "SyntaxError";
    case error_code::size_cap_exceeded: return "SizeCapExceeded";
    case error_code::too_many_players: return "TooManyPlayers";
    case error_code::exact_mode_cap_exceeded: return "ExactModeCapExceeded";
    case error_code::dimension_mismatch: return "DimensionMismatch";
    case error_code::not_optimal: return "NotOptimal";
    case error_code::role_metadata_missing: return "RoleMetadataMissing";
    case error_code::numerical_breakdown: return "NumericalBreakdown";
    case error_code::rank_deficient: return "RankDeficient";
  }
  return "Unknown";
}

/// Base of every exception thrown by the library. Carries a machine-readable
/// code next to the human-readable message.
class error : public std::runtime_error {
 public:
  error(error_code code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  error_code code() const noexcept { return code_; }

 private:
  error_code code_;
};

/// A game failed its invariants. Thrown by the parser and by algorithms that
/// require a validated game.
class validation_error : public error {
 public:
  using error::error;
};

class syntax_error : public error {
 public:
  explicit syntax_error(const std::string& what)
      : error(error_code::syntax_error, what) {}
};

class size_error : public error {
 public:
  using error::error;
};

class solver_error : public error {
 public:
  using error::error;
};

/// A statistical fit could not be computed from the supplied data.
class statistics_error : public error {
 public:
  using error::error;
};

}  // namespace leastcore

#endif  // LEASTCORE_ERROR_HPP
