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

#ifndef LEASTCORE_LP_MODEL_HPP
#define LEASTCORE_LP_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace leastcore {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class objective_sense { minimize, maximize };
enum class relation { less_equal, greater_equal, equal };

/// What a variable stands for in a least-core formulation. Builders attach a
/// role to every variable so results can be read back without relying on
/// names or column order.
enum class role_kind { none, epsilon, y_vertex, y_terminal, payoff, flow };

struct variable_role {
  role_kind kind = role_kind::none;
  /// Graph vertex for y_vertex; arc tail for flow.
  std::size_t vertex = 0;
  /// Arc head for flow (npos for the artificial terminal).
  std::size_t head = 0;
  /// 0-based player for payoff; owning player (1-based, 0 = skip) for flow.
  std::size_t player = 0;
};

struct lp_variable {
  std::string name;
  double lower = 0.0;
  double upper = infinity;
  variable_role role;
};

struct lp_term {
  std::size_t var;
  double coef;
};

/// Read-only view of one constraint row.
struct lp_row {
  std::string_view name;
  std::span<const lp_term> terms;
  relation rel;
  double rhs;
};

/// A sparse linear program. Rows are appended in order and stored
/// contiguously (compressed by row); the model never holds a dense matrix.
class lp_model {
 public:
  std::size_t add_variable(std::string name, double lower = 0.0, double upper = infinity,
                           variable_role role = {}) {
    if (lower > upper) throw std::invalid_argument("variable " + name + " has lower > upper");
    auto [it, inserted] = index_.emplace(name, variables_.size());
    if (!inserted) throw std::invalid_argument("duplicate variable name " + name);
    variables_.push_back({std::move(name), lower, upper, role});
    return variables_.size() - 1;
  }

  std::size_t add_constraint(std::string name, std::span<const lp_term> terms, relation rel,
                             double rhs) {
    for (const auto& t : terms) {
      if (t.var >= variables_.size()) {
        throw std::invalid_argument("constraint " + name + " references an undeclared variable");
      }
    }
    entries_.insert(entries_.end(), terms.begin(), terms.end());
    row_start_.push_back(entries_.size());
    row_names_.push_back(std::move(name));
    relations_.push_back(rel);
    rhs_.push_back(rhs);
    return rhs_.size() - 1;
  }

  std::size_t add_constraint(std::string name, std::initializer_list<lp_term> terms, relation rel,
                             double rhs) {
    return add_constraint(std::move(name), std::span<const lp_term>(terms.begin(), terms.size()),
                          rel, rhs);
  }

  void set_objective(objective_sense sense, std::vector<lp_term> terms) {
    for (const auto& t : terms) {
      if (t.var >= variables_.size()) {
        throw std::invalid_argument("objective references an undeclared variable");
      }
    }
    sense_ = sense;
    objective_ = std::move(terms);
  }

  std::size_t variable_count() const noexcept { return variables_.size(); }
  std::size_t constraint_count() const noexcept { return rhs_.size(); }
  std::size_t nonzero_count() const noexcept { return entries_.size(); }

  const lp_variable& variable(std::size_t j) const { return variables_.at(j); }
  const std::vector<lp_variable>& variables() const noexcept { return variables_; }

  lp_row row(std::size_t i) const {
    const auto begin = row_start_[i];
    const auto end = row_start_[i + 1];
    return {row_names_[i], std::span<const lp_term>(entries_.data() + begin, end - begin),
            relations_[i], rhs_[i]};
  }

  objective_sense sense() const noexcept { return sense_; }
  const std::vector<lp_term>& objective() const noexcept { return objective_; }

  std::optional<std::size_t> find_variable(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Indices of the variables with the given role, in declaration order.
  std::vector<std::size_t> variables_with_role(role_kind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < variables_.size(); ++j) {
      if (variables_[j].role.kind == kind) out.push_back(j);
    }
    return out;
  }

 private:
  std::vector<lp_variable> variables_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<lp_term> entries_;
  std::vector<std::size_t> row_start_{0};
  std::vector<std::string> row_names_;
  std::vector<relation> relations_;
  std::vector<double> rhs_;
  objective_sense sense_ = objective_sense::minimize;
  std::vector<lp_term> objective_;
};

enum class solve_status { optimal, infeasible, unbounded, iteration_limit };

inline std::string_view to_string(solve_status s) {
  switch (s) {
    case solve_status::optimal: return "optimal";
    case solve_status::infeasible: return "infeasible";
    case solve_status::unbounded: return "unbounded";
    case solve_status::iteration_limit: return "iteration-limit";
  }
  return "unknown";
}

/// An exact rational number as decimal numerator/denominator strings, plus
/// the nearest double.
struct rational_value {
  std::string numerator;
  std::string denominator;
  double approx = 0.0;

  std::string to_string() const { return numerator + "/" + denominator; }
};

struct lp_solution {
  solve_status status = solve_status::iteration_limit;
  double objective = 0.0;
  /// One value per model variable; present iff status == optimal.
  std::vector<double> point;
  /// Row multipliers at the final basis (optimal), or a Farkas-style
  /// certificate from phase one (infeasible). May be empty.
  std::vector<double> row_duals;
  /// Improving direction over the model variables (unbounded only).
  std::vector<double> ray;
  std::size_t iterations = 0;
  std::size_t phase_one_iterations = 0;
  std::size_t refactorizations = 0;
  bool used_bland = false;
  double seconds = 0.0;
  /// Largest bound or row violation of `point`.
  double primal_violation = 0.0;
  /// Largest wrong-signed reduced cost at exit.
  double dual_violation = 0.0;
  std::optional<rational_value> exact_objective;
  std::vector<rational_value> exact_point;

  bool has_point() const noexcept { return !point.empty(); }
};

/// Activity a_i . x of every row.
inline std::vector<double> row_activities(const lp_model& model, std::span<const double> x) {
  std::vector<double> act(model.constraint_count(), 0.0);
  for (std::size_t i = 0; i < model.constraint_count(); ++i) {
    double sum = 0.0;
    for (const auto& t : model.row(i).terms) sum += t.coef * x[t.var];
    act[i] = sum;
  }
  return act;
}

/// Largest violation of a bound or a row by the point x.
inline double max_violation(const lp_model& model, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    const auto& v = model.variable(j);
    worst = std::max({worst, v.lower - x[j], x[j] - v.upper});
  }
  const auto act = row_activities(model, x);
  for (std::size_t i = 0; i < model.constraint_count(); ++i) {
    const auto r = model.row(i);
    switch (r.rel) {
      case relation::less_equal: worst = std::max(worst, act[i] - r.rhs); break;
      case relation::greater_equal: worst = std::max(worst, r.rhs - act[i]); break;
      case relation::equal: worst = std::max(worst, std::abs(act[i] - r.rhs)); break;
    }
  }
  return worst;
}

inline double objective_value(const lp_model& model, std::span<const double> x) {
  double sum = 0.0;
  for (const auto& t : model.objective()) sum += t.coef * x[t.var];
  return sum;
}

}  // namespace leastcore

#endif  // LEASTCORE_LP_MODEL_HPP
