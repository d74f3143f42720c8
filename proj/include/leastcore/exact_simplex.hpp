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

#ifndef LEASTCORE_EXACT_SIMPLEX_HPP
#define LEASTCORE_EXACT_SIMPLEX_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "leastcore/error.hpp"
#include "leastcore/lp_model.hpp"

namespace leastcore {

using rational = boost::multiprecision::mpq_rational;

inline rational_value to_rational_value(const rational& q) {
  return {boost::multiprecision::numerator(q).str(), boost::multiprecision::denominator(q).str(),
          q.convert_to<double>()};
}

namespace detail {

template <class T>
bool is_zero(const T& v) {
  return v == 0;
}

/// Dense dictionary simplex for  max c^T x  s.t.  A x <= b, x >= 0,  using
/// Bland's rule throughout so it terminates on degenerate problems. Phase
/// one adds a single auxiliary column when some b_i is negative.
///
/// Instantiated with exact rationals; the dictionary layout follows the
/// classic (m+2) x (n+2) tableau with one objective row per phase.
template <class T>
class dictionary_simplex {
 public:
  enum class outcome { optimal, infeasible, unbounded };

  dictionary_simplex(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                     const std::vector<T>& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        N_(n_ + 1),
        B_(m_),
        D_(m_ + 2, std::vector<T>(n_ + 2)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) D_[i][j] = A[i][j];
    }
    for (int i = 0; i < m_; ++i) {
      B_[i] = n_ + i;
      D_[i][n_] = -1;
      D_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      N_[j] = j;
      D_[m_][j] = -c[j];
    }
    N_[n_] = -1;
    D_[m_ + 1][n_] = 1;
  }

  outcome solve(std::vector<T>& x) {
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
    }
    if (m_ > 0 && D_[r][n_ + 1] < 0) {
      pivot(r, n_);
      if (!run(2) || D_[m_ + 1][n_ + 1] < 0) return outcome::infeasible;
      for (int i = 0; i < m_; ++i) {
        if (B_[i] != -1) continue;
        int s = -1;
        for (int j = 0; j <= n_; ++j) {
          if (!is_zero(D_[i][j]) && (s < 0 || N_[j] < N_[s])) s = j;
        }
        if (s >= 0) pivot(i, s);
      }
    }
    const bool bounded = run(1);
    x.assign(n_, T(0));
    for (int i = 0; i < m_; ++i) {
      if (B_[i] >= 0 && B_[i] < n_) x[B_[i]] = D_[i][n_ + 1];
    }
    return bounded ? outcome::optimal : outcome::unbounded;
  }

  T value() const { return D_[m_][n_ + 1]; }
  std::size_t pivots() const noexcept { return pivots_; }

 private:
  void pivot(int r, int s) {
    const T inv = T(1) / D_[r][s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || is_zero(D_[i][s])) continue;
      const T f = D_[i][s] * inv;
      for (int j = 0; j < n_ + 2; ++j) {
        if (!is_zero(D_[r][j])) D_[i][j] -= D_[r][j] * f;
      }
      D_[i][s] = D_[r][s] * f;
    }
    for (int j = 0; j < n_ + 2; ++j) {
      if (j != s) D_[r][j] *= inv;
    }
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r) D_[i][s] *= -inv;
    }
    D_[r][s] = inv;
    std::swap(B_[r], N_[s]);
    ++pivots_;
  }

  // phase 1: real objective (row m), auxiliary column excluded.
  // phase 2: auxiliary objective (row m+1).
  bool run(int phase) {
    const int x = phase == 1 ? m_ : m_ + 1;
    while (true) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (phase == 1 && N_[j] == -1) continue;
        if (D_[x][j] < 0 && (s < 0 || N_[j] < N_[s])) s = j;
      }
      if (s < 0) return true;
      int r = -1;
      T best;
      for (int i = 0; i < m_; ++i) {
        if (D_[i][s] <= 0) continue;
        T ratio = D_[i][n_ + 1] / D_[i][s];
        if (r < 0 || ratio < best || (ratio == best && B_[i] < B_[r])) {
          r = i;
          best = std::move(ratio);
        }
      }
      if (r < 0) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<int> N_, B_;
  std::vector<std::vector<T>> D_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

struct exact_options {
  /// Largest rows * columns of the model accepted in exact mode.
  std::size_t cell_cap = 2'000'000;
};

/// Solves the model over arbitrary-precision rationals with Bland's rule.
/// Every coefficient of the model is taken at its exact binary value.
inline lp_solution solve_exact(const lp_model& model, const exact_options& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t nv = model.variable_count();
  const std::size_t m = model.constraint_count();
  if (nv * std::max<std::size_t>(m, 1) > opts.cell_cap) {
    throw size_error(error_code::exact_mode_cap_exceeded,
                     std::to_string(m) + " x " + std::to_string(nv) +
                         " model exceeds the exact-mode cap of " + std::to_string(opts.cell_cap));
  }

  // Substitute x_j = offset_j + sum coef * z over non-negative columns z.
  struct part {
    std::size_t col;
    int sign;
  };
  std::vector<std::vector<part>> parts(nv);
  std::vector<rational> offset(nv, rational(0));
  std::size_t ncols = 0;
  std::vector<std::pair<std::size_t, rational>> upper_rows;  // (column, limit)
  for (std::size_t j = 0; j < nv; ++j) {
    const auto& v = model.variable(j);
    if (std::isfinite(v.lower)) {
      offset[j] = rational(v.lower);
      parts[j].push_back({ncols, 1});
      if (std::isfinite(v.upper)) upper_rows.push_back({ncols, rational(v.upper) - rational(v.lower)});
      ++ncols;
    } else if (std::isfinite(v.upper)) {
      offset[j] = rational(v.upper);
      parts[j].push_back({ncols++, -1});
    } else {
      parts[j].push_back({ncols++, 1});
      parts[j].push_back({ncols++, -1});
    }
  }

  std::vector<std::vector<rational>> A;
  std::vector<rational> b;
  auto add_row = [&](const lp_row& row, int sign) {
    std::vector<rational> a(ncols, rational(0));
    rational rhs(row.rhs);
    for (const auto& t : row.terms) {
      const rational coef(t.coef);
      rhs -= coef * offset[t.var];
      for (const auto& p : parts[t.var]) a[p.col] += coef * p.sign;
    }
    if (sign < 0) {
      for (auto& e : a) e = -e;
      rhs = -rhs;
    }
    A.push_back(std::move(a));
    b.push_back(std::move(rhs));
  };
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = model.row(i);
    if (row.rel != relation::greater_equal) add_row(row, 1);
    if (row.rel != relation::less_equal) add_row(row, -1);
  }
  for (const auto& [col, limit] : upper_rows) {
    std::vector<rational> a(ncols, rational(0));
    a[col] = 1;
    A.push_back(std::move(a));
    b.push_back(limit);
  }

  const int sense = model.sense() == objective_sense::maximize ? 1 : -1;
  std::vector<rational> c(ncols, rational(0));
  rational constant(0);
  for (const auto& t : model.objective()) {
    const rational coef(t.coef);
    constant += coef * offset[t.var];
    for (const auto& p : parts[t.var]) c[p.col] += coef * p.sign * sense;
  }

  detail::dictionary_simplex<rational> lp(A, b, c);
  std::vector<rational> z;
  const auto result = lp.solve(z);

  lp_solution sol;
  sol.iterations = lp.pivots();
  sol.used_bland = true;
  if (result == detail::dictionary_simplex<rational>::outcome::infeasible) {
    sol.status = solve_status::infeasible;
  } else if (result == detail::dictionary_simplex<rational>::outcome::unbounded) {
    sol.status = solve_status::unbounded;
  } else {
    sol.status = solve_status::optimal;
    std::vector<rational> xs(nv);
    for (std::size_t j = 0; j < nv; ++j) {
      xs[j] = offset[j];
      for (const auto& p : parts[j]) xs[j] += z[p.col] * p.sign;
    }
    const rational obj = rational(sense) * lp.value() + constant;
    sol.exact_objective = to_rational_value(obj);
    sol.objective = obj.convert_to<double>();
    sol.point.resize(nv);
    sol.exact_point.reserve(nv);
    for (std::size_t j = 0; j < nv; ++j) {
      sol.exact_point.push_back(to_rational_value(xs[j]));
      sol.point[j] = sol.exact_point.back().approx;
    }
    sol.primal_violation = max_violation(model, sol.point);
  }
  sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

}  // namespace leastcore

#endif  // LEASTCORE_EXACT_SIMPLEX_HPP
