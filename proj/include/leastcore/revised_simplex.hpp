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

#ifndef LEASTCORE_REVISED_SIMPLEX_HPP
#define LEASTCORE_REVISED_SIMPLEX_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "leastcore/detail/sparse_lu.hpp"
#include "leastcore/error.hpp"
#include "leastcore/lp_model.hpp"

namespace leastcore {

enum class pricing_rule {
  /// Devex reference weights (approximate steepest edge).
  devex,
  /// Largest reduced cost.
  dantzig,
  /// Smallest eligible index, always.
  bland,
};

struct solver_options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  /// 0 selects 50 * (rows + columns).
  std::size_t iteration_cap = 0;
  pricing_rule pricing = pricing_rule::devex;
  /// Iterations without objective progress before switching to Bland's rule.
  std::size_t stall_window = 200;
  std::size_t refactor_period = 100;
  /// Route through the rational solver.
  bool exact = false;
  /// Wall-clock limit in seconds; 0 disables it. Hitting it reports
  /// iteration-limit.
  double time_limit = 0.0;
};

namespace detail {

/// Bounded two-phase primal revised simplex on the computational form
///
///   [A  -I  S] (x, s, a) = 0,   l <= (x, s) <= u,   a >= 0,
///
/// where s holds one logical per row (s_i = a_i x, bounded by the row's
/// relation) and a holds artificial columns for the rows whose logical is
/// out of bounds at the starting point. Phase one minimizes the sum of the
/// artificials; phase two fixes them at zero and minimizes the objective.
class revised_simplex {
 public:
  revised_simplex(const lp_model& model, const solver_options& opts)
      : model_(model), opts_(opts) {}

  lp_solution run() {
    const auto t0 = std::chrono::steady_clock::now();
    start_ = t0;
    setup();
    cap_ = opts_.iteration_cap ? opts_.iteration_cap : 50 * (m_ + nv_);
    lp_solution sol;

    refactor();
    crash_free_columns();
    expel_fixed_basics();
    solve_status status = solve_status::optimal;
    if (art_count_ > 0) {
      set_phase_one_costs();
      perturb_bounds();
      status = iterate();
      sol.phase_one_iterations = iterations_;
      if (status == solve_status::optimal) {
        double worst = 0.0;
        for (int j = art_begin_; j < ncols_; ++j) worst = std::max(worst, x_[j]);
        if (worst > infeasibility_limit()) {
          status = solve_status::infeasible;
          sol.row_duals = duals();
        }
      } else if (status == solve_status::unbounded) {
        throw solver_error(error_code::numerical_breakdown, "phase one reported unboundedness");
      }
      if (status == solve_status::optimal) {
        for (int j = art_begin_; j < ncols_; ++j) {
          up_[j] = 0.0;
          if (perturbed_) saved_up_[j] = 0.0;
          if (pos_of_[j] < 0) x_[j] = 0.0;
        }
      } else {
        restore_bounds();
      }
    }
    if (status == solve_status::optimal) {
      expel_fixed_basics();
      set_phase_two_costs();
      perturb_bounds();
      status = iterate();
      if (status == solve_status::optimal) {
        remove_perturbation();
        if (!dual_cleanup()) return restart_unperturbed(t0);
        // Cleanup keeps dual feasibility up to drift; polish with primal.
        reset_pricing();
        status = iterate();
      } else {
        restore_bounds();
      }
    }

    sol.status = status;
    sol.iterations = iterations_;
    sol.refactorizations = refactorizations_;
    sol.used_bland = used_bland_;
    if (status == solve_status::optimal) {
      refactor();
      sol.point.assign(x_.begin(), x_.begin() + nv_);
      for (int j = 0; j < nv_; ++j) {
        sol.point[j] = std::clamp(sol.point[j], lo_[j], up_[j]);
      }
      sol.objective = objective_value(model_, sol.point);
      sol.primal_violation = max_violation(model_, sol.point);
      compute_duals();
      compute_reduced_costs();
      sol.dual_violation = dual_infeasibility();
      sol.row_duals = duals();
      if (model_.sense() == objective_sense::maximize) {
        for (auto& y : sol.row_duals) y = -y;
      }
    } else if (status == solve_status::unbounded) {
      sol.ray = ray_;
    }
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
  }

 private:
  enum class state : unsigned char { basic, at_lower, at_upper, free_zero };

  void setup() {
    nv_ = static_cast<int>(model_.variable_count());
    m_ = static_cast<int>(model_.constraint_count());

    // Structural columns in compressed-column form.
    std::vector<int> counts(nv_, 0);
    for (int i = 0; i < m_; ++i) {
      for (const auto& t : model_.row(i).terms) ++counts[t.var];
    }
    col_start_.assign(1, 0);
    for (int j = 0; j < nv_; ++j) col_start_.push_back(col_start_.back() + counts[j]);
    col_index_.resize(col_start_.back());
    col_value_.resize(col_start_.back());
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < m_; ++i) {
      for (const auto& t : model_.row(i).terms) {
        col_index_[fill[t.var]] = i;
        col_value_[fill[t.var]] = t.coef;
        ++fill[t.var];
      }
    }

    lo_.resize(nv_ + m_);
    up_.resize(nv_ + m_);
    for (int j = 0; j < nv_; ++j) {
      lo_[j] = model_.variable(j).lower;
      up_[j] = model_.variable(j).upper;
    }
    for (int i = 0; i < m_; ++i) {
      const auto r = model_.row(i);
      lo_[nv_ + i] = r.rel == relation::less_equal ? -infinity : r.rhs;
      up_[nv_ + i] = r.rel == relation::greater_equal ? infinity : r.rhs;
    }

    x_.assign(nv_ + m_, 0.0);
    st_.assign(nv_ + m_, state::at_lower);
    for (int j = 0; j < nv_; ++j) place_at_bound(j);

    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < nv_; ++j) {
      if (x_[j] == 0.0) continue;
      for (int t = col_start_[j]; t < col_start_[j + 1]; ++t) act[col_index_[t]] += col_value_[t] * x_[j];
    }

    head_.assign(m_, -1);
    art_begin_ = nv_ + m_;
    std::vector<std::pair<int, double>> artificials;  // (row, sign)
    for (int i = 0; i < m_; ++i) {
      const int s = nv_ + i;
      if (act[i] >= lo_[s] - opts_.feasibility_tol && act[i] <= up_[s] + opts_.feasibility_tol) {
        x_[s] = act[i];
        st_[s] = state::basic;
        head_[i] = s;
        continue;
      }
      const bool below = act[i] < lo_[s];
      x_[s] = below ? lo_[s] : up_[s];
      st_[s] = below ? state::at_lower : state::at_upper;
      artificials.push_back({i, x_[s] - act[i] > 0 ? 1.0 : -1.0});
    }
    art_count_ = static_cast<int>(artificials.size());
    ncols_ = nv_ + m_ + art_count_;
    lo_.resize(ncols_, 0.0);
    up_.resize(ncols_, infinity);
    x_.resize(ncols_, 0.0);
    st_.resize(ncols_, state::basic);
    art_row_.resize(art_count_);
    art_sign_.resize(art_count_);
    for (int a = 0; a < art_count_; ++a) {
      const auto [row, sign] = artificials[a];
      const int j = art_begin_ + a;
      art_row_[a] = row;
      art_sign_[a] = sign;
      x_[j] = (x_[nv_ + row] - act[row]) / sign;
      head_[row] = j;
    }
    pos_of_.assign(ncols_, -1);
    for (int p = 0; p < m_; ++p) pos_of_[head_[p]] = p;

    // Row-wise copy of [A -I S] for pivot-row computation.
    std::vector<int> rcount(m_, 0);
    for (int j = 0; j < ncols_; ++j) for_each_entry(j, [&](int r, double) { ++rcount[r]; });
    row_start_.assign(1, 0);
    for (int i = 0; i < m_; ++i) row_start_.push_back(row_start_.back() + rcount[i]);
    row_col_.resize(row_start_.back());
    row_val_.resize(row_start_.back());
    std::vector<int> rfill(row_start_.begin(), row_start_.end() - 1);
    for (int j = 0; j < ncols_; ++j) {
      for_each_entry(j, [&](int r, double v) {
        row_col_[rfill[r]] = j;
        row_val_[rfill[r]] = v;
        ++rfill[r];
      });
    }

    cost_.assign(ncols_, 0.0);
    d_.assign(ncols_, 0.0);
    weight_.assign(ncols_, 1.0);
    pi_.assign(m_, 0.0);
  }

  void place_at_bound(int j) {
    if (std::isfinite(lo_[j])) {
      x_[j] = lo_[j];
      st_[j] = state::at_lower;
    } else if (std::isfinite(up_[j])) {
      x_[j] = up_[j];
      st_[j] = state::at_upper;
    } else {
      x_[j] = 0.0;
      st_[j] = state::free_zero;
    }
  }

  template <class Fn>
  void for_each_entry(int j, Fn&& fn) const {
    if (j < nv_) {
      for (int t = col_start_[j]; t < col_start_[j + 1]; ++t) fn(col_index_[t], col_value_[t]);
    } else if (j < art_begin_) {
      fn(j - nv_, -1.0);
    } else {
      fn(art_row_[j - art_begin_], art_sign_[j - art_begin_]);
    }
  }

  double infeasibility_limit() const {
    double scale = 1.0;
    for (int i = 0; i < m_; ++i) {
      const auto r = model_.row(i);
      scale = std::max(scale, std::abs(r.rhs));
    }
    return std::max(opts_.feasibility_tol * 10.0, 1e-9) * scale;
  }

  void set_phase_one_costs() {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = art_begin_; j < ncols_; ++j) cost_[j] = 1.0;
    reset_pricing();
  }

  void set_phase_two_costs() {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    const double sign = model_.sense() == objective_sense::maximize ? -1.0 : 1.0;
    for (const auto& t : model_.objective()) cost_[t.var] += sign * t.coef;
    reset_pricing();
  }

  void reset_pricing() {
    std::fill(weight_.begin(), weight_.end(), 1.0);
    compute_duals();
    compute_reduced_costs();
    bland_ = opts_.pricing == pricing_rule::bland;
    best_objective_ = current_objective();
    since_progress_ = 0;
  }

  // -- factorization -------------------------------------------------------

  void refactor() {
    for (int attempt = 0; attempt < 3; ++attempt) {
      std::vector<detail::column_view> cols(m_);
      std::vector<std::vector<int>> idx(m_);
      std::vector<std::vector<double>> val(m_);
      for (int p = 0; p < m_; ++p) {
        const int j = head_[p];
        if (j < nv_) {
          const auto b = col_start_[j], e = col_start_[j + 1];
          cols[p] = {std::span<const int>(col_index_.data() + b, e - b),
                     std::span<const double>(col_value_.data() + b, e - b)};
        } else {
          for_each_entry(j, [&](int r, double v) {
            idx[p].push_back(r);
            val[p].push_back(v);
          });
          cols[p] = {idx[p], val[p]};
        }
      }
      auto outcome = lu_.factorize(m_, cols);
      ++refactorizations_;
      if (outcome.bad_positions.empty()) {
        recompute_primal();
        shift_infeasible_basics();
        return;
      }
      // Swap dependent columns for the logicals of uncovered rows.
      for (std::size_t t = 0; t < outcome.bad_positions.size(); ++t) {
        const int p = outcome.bad_positions[t];
        const int out = head_[p];
        const int in = nv_ + outcome.free_rows[t];
        pos_of_[out] = -1;
        place_nonbasic(out);
        if (pos_of_[in] >= 0) {
          // The logical is already basic elsewhere; fall back to any
          // nonbasic logical.
          for (int i = 0; i < m_; ++i) {
            if (pos_of_[nv_ + i] < 0) {
              head_[p] = nv_ + i;
              break;
            }
          }
        } else {
          head_[p] = in;
        }
        pos_of_[head_[p]] = p;
        st_[head_[p]] = state::basic;
      }
    }
    throw solver_error(error_code::numerical_breakdown, "basis stayed singular after repair");
  }

  /// Refactor on the fixed period, or earlier once the eta file grows well
  /// past the factors and every solve pays mostly for the updates.
  bool refactor_due() const {
    return lu_.eta_count() >= opts_.refactor_period ||
           lu_.eta_nonzeros() > 5 * (lu_.factor_nonzeros() + static_cast<std::size_t>(m_));
  }

  void place_nonbasic(int j) {
    if (std::isfinite(lo_[j]) && (!std::isfinite(up_[j]) || std::abs(x_[j] - lo_[j]) <= std::abs(x_[j] - up_[j]))) {
      x_[j] = lo_[j];
      st_[j] = state::at_lower;
    } else if (std::isfinite(up_[j])) {
      x_[j] = up_[j];
      st_[j] = state::at_upper;
    } else {
      x_[j] = 0.0;
      st_[j] = state::free_zero;
    }
  }

  void recompute_primal() {
    std::vector<double> rhs(m_, 0.0);
    for (int j = 0; j < ncols_; ++j) {
      if (pos_of_[j] >= 0 || x_[j] == 0.0) continue;
      const double v = x_[j];
      for_each_entry(j, [&](int r, double a) { rhs[r] -= a * v; });
    }
    lu_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
  }

  void compute_duals() {
    std::vector<double> cb(m_);
    for (int p = 0; p < m_; ++p) cb[p] = cost_[head_[p]];
    lu_.btran(cb);
    pi_ = std::move(cb);
  }

  void compute_reduced_costs() {
    for (int j = 0; j < ncols_; ++j) {
      if (pos_of_[j] >= 0) {
        d_[j] = 0.0;
        continue;
      }
      double v = cost_[j];
      for_each_entry(j, [&](int r, double a) { v -= pi_[r] * a; });
      d_[j] = v;
    }
  }

  std::vector<double> duals() const { return pi_; }

  double current_objective() const {
    double obj = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (cost_[j] != 0.0) obj += cost_[j] * x_[j];
    }
    return obj;
  }

  double dual_infeasibility() const {
    double worst = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (pos_of_[j] >= 0 || lo_[j] == up_[j]) continue;
      switch (st_[j]) {
        case state::at_lower: worst = std::max(worst, -d_[j]); break;
        case state::at_upper: worst = std::max(worst, d_[j]); break;
        case state::free_zero: worst = std::max(worst, std::abs(d_[j])); break;
        case state::basic: break;
      }
    }
    return worst;
  }

  /// Pivots nonbasic free columns into the basis in place of basic logicals
  /// with zero-step pivots. Free variables never leave once basic, and doing
  /// this up front spares phase two a long run of degenerate pivots.
  void crash_free_columns() {
    std::vector<double> alpha(m_);
    for (int j = 0; j < nv_; ++j) {
      if (st_[j] != state::free_zero) continue;
      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_each_entry(j, [&](int r, double v) { alpha[r] = v; });
      lu_.ftran(alpha);
      int best = -1;
      double best_abs = 0.1;
      for (int p = 0; p < m_; ++p) {
        const int h = head_[p];
        if (h < nv_ || h >= art_begin_) continue;
        if (std::abs(alpha[p]) > best_abs) {
          best_abs = std::abs(alpha[p]);
          best = p;
        }
      }
      if (best < 0) continue;
      const int out = head_[best];
      // The entering column stays at zero, so basic values are unchanged and
      // the logical leaves at its current value. Only a logical sitting on
      // one of its bounds can leave without moving anything.
      if (x_[out] == lo_[out]) {
        st_[out] = state::at_lower;
      } else if (x_[out] == up_[out]) {
        st_[out] = state::at_upper;
      } else {
        continue;
      }
      head_[best] = j;
      pos_of_[j] = best;
      pos_of_[out] = -1;
      st_[j] = state::basic;
      lu_.update(best, alpha);
      if (refactor_due()) refactor();
    }
    refactor();
  }

  // -- degeneracy control ---------------------------------------------------

  /// Replaces basic variables whose bounds coincide (logicals of equality
  /// rows, spent artificials) by nonbasic columns through zero-step pivots.
  /// A fixed basic variable blocks every entering column that touches its
  /// row, and perturbation cannot loosen it.
  void expel_fixed_basics() {
    std::vector<double> rho(m_), alpha(m_), prow(ncols_, 0.0);
    std::vector<int> touched;
    bool changed = false;
    for (int p = 0; p < m_; ++p) {
      const int out = head_[p];
      if (lo_[out] != up_[out]) continue;
      std::fill(rho.begin(), rho.end(), 0.0);
      rho[p] = 1.0;
      lu_.btran(rho);
      for (int i = 0; i < m_; ++i) {
        if (rho[i] == 0.0) continue;
        for (int t = row_start_[i]; t < row_start_[i + 1]; ++t) {
          const int j = row_col_[t];
          if (prow[j] == 0.0) touched.push_back(j);
          prow[j] += rho[i] * row_val_[t];
        }
      }
      int q = -1;
      double best = 1e-3;
      for (int j : touched) {
        if (pos_of_[j] < 0 && lo_[j] != up_[j] && std::abs(prow[j]) > best) {
          best = std::abs(prow[j]);
          q = j;
        }
      }
      for (int j : touched) prow[j] = 0.0;
      touched.clear();
      if (q < 0) continue;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_each_entry(q, [&](int r, double v) { alpha[r] = v; });
      lu_.ftran(alpha);
      if (std::abs(alpha[p]) < 1e-7) continue;
      x_[out] = lo_[out];
      st_[out] = state::at_lower;
      head_[p] = q;
      pos_of_[q] = p;
      pos_of_[out] = -1;
      st_[q] = state::basic;
      lu_.update(p, alpha);
      changed = true;
      if (refactor_due()) refactor();
    }
    if (changed) refactor();
  }

  /// Widens the bounds of basic variables (and the far bound of nonbasic
  /// ones) by small deterministic amounts so that ratio tests rarely tie at
  /// zero. Nonbasic variables keep their current value.
  void perturb_bounds() {
    if (!perturb_ || perturbed_) return;
    saved_lo_ = lo_;
    saved_up_ = up_;
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int j = 0; j < art_begin_; ++j) {
      if (lo_[j] == up_[j]) continue;
      h += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = h;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      z ^= z >> 31;
      const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
      const bool basic = pos_of_[j] >= 0;
      if (std::isfinite(lo_[j]) && (basic || st_[j] != state::at_lower)) {
        lo_[j] -= perturb_scale * (1.0 + u) * (1.0 + std::abs(lo_[j]));
      }
      if (std::isfinite(up_[j]) && (basic || st_[j] != state::at_upper)) {
        up_[j] += perturb_scale * (1.0 + u) * (1.0 + std::abs(up_[j]));
      }
    }
    perturbed_ = true;
  }

  /// While bounds are perturbed, absorbs drift exposed by a refactor by
  /// moving the violated bound just past the basic value. The shift is
  /// undone together with the perturbation.
  void shift_infeasible_basics() {
    if (!perturbed_) return;
    const double ftol = opts_.feasibility_tol;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (j >= art_begin_) continue;
      if (x_[j] < lo_[j] - ftol) lo_[j] = x_[j] - perturb_scale * (1.0 + std::abs(x_[j]));
      if (x_[j] > up_[j] + ftol) up_[j] = x_[j] + perturb_scale * (1.0 + std::abs(x_[j]));
    }
  }

  void restore_bounds() {
    if (!perturbed_) return;
    lo_ = saved_lo_;
    up_ = saved_up_;
    perturbed_ = false;
  }

  void remove_perturbation() {
    if (!perturbed_) return;
    restore_bounds();
    for (int j = 0; j < ncols_; ++j) {
      if (pos_of_[j] >= 0) continue;
      if (st_[j] == state::at_lower) x_[j] = lo_[j];
      if (st_[j] == state::at_upper) x_[j] = up_[j];
    }
    refactor();
    compute_duals();
    compute_reduced_costs();
  }

  /// Dual simplex passes that drive the basic variables back inside their
  /// bounds while keeping the reduced costs dual feasible. Returns false if
  /// it cannot finish, in which case the caller starts over unperturbed.
  bool dual_cleanup() {
    const double ftol = opts_.feasibility_tol;
    const std::size_t cap = static_cast<std::size_t>(m_) + 1000;
    std::vector<double> rho(m_), alpha(m_), prow(ncols_, 0.0);
    for (std::size_t it = 0; it < cap; ++it) {
      int leave = -1;
      double worst = ftol;
      for (int p = 0; p < m_; ++p) {
        const int j = head_[p];
        const double v = std::max(lo_[j] - x_[j], x_[j] - up_[j]);
        if (v > worst) {
          worst = v;
          leave = p;
        }
      }
      if (leave < 0) return true;
      const int out = head_[leave];
      const bool to_lower = x_[out] < lo_[out];

      std::fill(rho.begin(), rho.end(), 0.0);
      rho[leave] = 1.0;
      lu_.btran(rho);
      std::fill(prow.begin(), prow.end(), 0.0);
      for (int i = 0; i < m_; ++i) {
        if (rho[i] == 0.0) continue;
        for (int t = row_start_[i]; t < row_start_[i + 1]; ++t) prow[row_col_[t]] += rho[i] * row_val_[t];
      }
      // x_out moves by -prow_j * dx_j; it must rise when below its lower
      // bound and fall when above its upper bound.
      int q = -1;
      double best = infinity, best_abs = 0.0;
      for (int j = 0; j < ncols_; ++j) {
        if (pos_of_[j] >= 0 || lo_[j] == up_[j]) continue;
        const double a = prow[j];
        if (std::abs(a) <= 1e-9) continue;
        const double rise = -a;  // change of x_out per unit increase of x_j
        bool ok = false;
        switch (st_[j]) {
          case state::at_lower: ok = to_lower ? rise > 0 : rise < 0; break;
          case state::at_upper: ok = to_lower ? rise < 0 : rise > 0; break;
          case state::free_zero: ok = true; break;
          case state::basic: break;
        }
        if (!ok) continue;
        const double ratio = std::abs(d_[j]) / std::abs(a);
        if (ratio < best - 1e-12 || (ratio <= best + 1e-12 && std::abs(a) > best_abs)) {
          best = ratio;
          best_abs = std::abs(a);
          q = j;
        }
      }
      if (q < 0) return false;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_each_entry(q, [&](int r, double v) { alpha[r] = v; });
      lu_.ftran(alpha);
      if (std::abs(alpha[leave]) < 1e-11) return false;
      const double target = to_lower ? lo_[out] : up_[out];
      const double step = (x_[out] - target) / alpha[leave];
      for (int p = 0; p < m_; ++p) x_[head_[p]] -= step * alpha[p];
      x_[q] += step;
      x_[out] = target;
      st_[out] = to_lower ? state::at_lower : state::at_upper;
      head_[leave] = q;
      pos_of_[q] = leave;
      pos_of_[out] = -1;
      st_[q] = state::basic;
      lu_.update(leave, alpha);
      ++iterations_;
      if (refactor_due()) refactor();
      compute_duals();
      compute_reduced_costs();
    }
    return false;
  }

  lp_solution restart_unperturbed(std::chrono::steady_clock::time_point t0) {
    const std::size_t spent = iterations_;
    revised_simplex again(model_, opts_);
    again.perturb_ = false;
    auto sol = again.run();
    sol.iterations += spent;
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
  }

  // -- iterations ----------------------------------------------------------

  /// Direction in which nonbasic j improves the objective: +1, -1, or 0.
  int improving_direction(int j) const {
    if (pos_of_[j] >= 0 || lo_[j] == up_[j]) return 0;
    const double tol = opts_.optimality_tol;
    switch (st_[j]) {
      case state::at_lower: return d_[j] < -tol ? 1 : 0;
      case state::at_upper: return d_[j] > tol ? -1 : 0;
      case state::free_zero: return d_[j] < -tol ? 1 : (d_[j] > tol ? -1 : 0);
      case state::basic: return 0;
    }
    return 0;
  }

  int choose_entering() const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (improving_direction(j) == 0) continue;
      if (bland_) return j;
      double score = d_[j] * d_[j];
      if (opts_.pricing == pricing_rule::devex) score /= weight_[j];
      // Free variables never leave once basic; bring them in early.
      if (st_[j] == state::free_zero) score *= 1e3;
      if (best < 0 || score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  bool out_of_time() const {
    if (opts_.time_limit <= 0.0) return false;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() >
           opts_.time_limit;
  }

  solve_status iterate() {
    const double ftol = opts_.feasibility_tol;
    constexpr double pivot_tol = 1e-7;
    std::vector<double> alpha(m_);
    std::vector<double> rho(m_);
    std::vector<double> prow(ncols_, 0.0);
    std::vector<int> prow_touched;
    std::vector<char> touched_flag(ncols_, 0);
    bool rechecked = false;

    while (true) {
      if (iterations_ >= cap_) return solve_status::iteration_limit;
      if (iterations_ % 64 == 0 && out_of_time()) return solve_status::iteration_limit;

      const int q = choose_entering();
      if (q < 0) {
        if (rechecked) return solve_status::optimal;
        // Confirm with freshly computed duals before declaring optimality.
        refactor();
        compute_duals();
        compute_reduced_costs();
        rechecked = true;
        continue;
      }
      rechecked = false;
      const double dir = improving_direction(q) > 0 ? 1.0 : -1.0;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_each_entry(q, [&](int r, double v) { alpha[r] = v; });
      lu_.ftran(alpha);

      // Harris pass one: largest step keeping every basic variable within
      // its bounds relaxed by the feasibility tolerance.
      double theta_max = infinity;
      for (int p = 0; p < m_; ++p) {
        const double a = dir * alpha[p];
        if (std::abs(a) <= pivot_tol) continue;
        const int j = head_[p];
        if (a > 0.0 && std::isfinite(lo_[j])) {
          theta_max = std::min(theta_max, (x_[j] - lo_[j] + ftol) / a);
        } else if (a < 0.0 && std::isfinite(up_[j])) {
          theta_max = std::min(theta_max, (up_[j] - x_[j] + ftol) / -a);
        }
      }
      const double range = up_[q] - lo_[q];

      if (!std::isfinite(theta_max) && !std::isfinite(range)) {
        ray_.assign(nv_, 0.0);
        if (q < nv_) ray_[q] = dir;
        for (int p = 0; p < m_; ++p) {
          if (head_[p] < nv_) ray_[head_[p]] = -dir * alpha[p];
        }
        return solve_status::unbounded;
      }

      // Pass two: among ratios within theta_max prefer the largest pivot.
      int leave = -1;
      double theta = 0.0;
      double best_abs = 0.0;
      for (int p = 0; p < m_; ++p) {
        const double a = dir * alpha[p];
        if (std::abs(a) <= pivot_tol) continue;
        const int j = head_[p];
        double ratio;
        if (a > 0.0 && std::isfinite(lo_[j])) {
          ratio = (x_[j] - lo_[j]) / a;
        } else if (a < 0.0 && std::isfinite(up_[j])) {
          ratio = (up_[j] - x_[j]) / -a;
        } else {
          continue;
        }
        // Bland's guarantee needs the true minimum ratio, so the Harris
        // window only applies under the normal pricing rules.
        if (!bland_ && ratio > theta_max) continue;
        const bool better =
            bland_ ? (leave < 0 || ratio < theta - 1e-15 ||
                      (ratio <= theta + 1e-15 && j < head_[leave]))
                   : std::abs(a) > best_abs;
        if (better) {
          leave = p;
          theta = ratio;
          best_abs = std::abs(a);
        }
      }
      theta = std::max(theta, 0.0);

      if (std::isfinite(range) && (leave < 0 || range <= theta)) {
        // Bound flip: the entering variable crosses to its other bound.
        for (int p = 0; p < m_; ++p) x_[head_[p]] -= dir * range * alpha[p];
        if (dir > 0) {
          x_[q] = up_[q];
          st_[q] = state::at_upper;
        } else {
          x_[q] = lo_[q];
          st_[q] = state::at_lower;
        }
        ++iterations_;
        track_progress();
        continue;
      }

      if (std::abs(alpha[leave]) < 1e-11) {
        refactor();
        compute_duals();
        compute_reduced_costs();
        continue;
      }

      // Pivot row rho^T [A -I S] over nonbasic columns.
      std::fill(rho.begin(), rho.end(), 0.0);
      rho[leave] = 1.0;
      lu_.btran(rho);
      for (int i = 0; i < m_; ++i) {
        const double r = rho[i];
        if (r == 0.0) continue;
        for (int t = row_start_[i]; t < row_start_[i + 1]; ++t) {
          const int j = row_col_[t];
          if (pos_of_[j] >= 0) continue;
          if (!touched_flag[j]) {
            touched_flag[j] = 1;
            prow_touched.push_back(j);
          }
          prow[j] += r * row_val_[t];
        }
      }

      // Primal update.
      for (int p = 0; p < m_; ++p) x_[head_[p]] -= dir * theta * alpha[p];
      x_[q] += dir * theta;
      const int out = head_[leave];
      if (dir * alpha[leave] > 0.0) {
        x_[out] = lo_[out];
        st_[out] = state::at_lower;
      } else {
        x_[out] = up_[out];
        st_[out] = state::at_upper;
      }
      if (lo_[out] == up_[out]) st_[out] = state::at_lower;

      // Dual update and devex weights.
      const double alpha_q = alpha[leave];
      const double theta_d = d_[q] / alpha_q;
      const double wq = weight_[q];
      for (int j : prow_touched) {
        if (j != q) {
          d_[j] -= theta_d * prow[j];
          const double ratio = prow[j] / alpha_q;
          weight_[j] = std::max(weight_[j], ratio * ratio * wq);
        }
        prow[j] = 0.0;
        touched_flag[j] = 0;
      }
      prow_touched.clear();
      d_[q] = 0.0;
      d_[out] = -theta_d;
      weight_[out] = std::max(wq / (alpha_q * alpha_q), 1.0);
      if (weight_[out] > 1e6 || wq > 1e6) std::fill(weight_.begin(), weight_.end(), 1.0);

      // Basis change.
      head_[leave] = q;
      pos_of_[q] = leave;
      pos_of_[out] = -1;
      st_[q] = state::basic;
      lu_.update(leave, alpha);
      ++iterations_;

      if (refactor_due()) {
        refactor();
        compute_duals();
        compute_reduced_costs();
      }
      track_progress();
    }
  }

  void track_progress() {
    const double obj = current_objective();
    if (obj < best_objective_ - 1e-12 * (1.0 + std::abs(best_objective_))) {
      best_objective_ = obj;
      since_progress_ = 0;
      if (bland_ && opts_.pricing != pricing_rule::bland) bland_ = false;
      return;
    }
    if (++since_progress_ >= opts_.stall_window && !bland_) {
      bland_ = true;
      used_bland_ = true;
      since_progress_ = 0;
    }
  }

  static constexpr double perturb_scale = 1e-7;

  const lp_model& model_;
  solver_options opts_;
  bool perturb_ = true;
  bool perturbed_ = false;
  std::vector<double> saved_lo_, saved_up_;
  std::chrono::steady_clock::time_point start_;

  int nv_ = 0, m_ = 0, ncols_ = 0, art_begin_ = 0, art_count_ = 0;
  std::vector<int> col_start_, col_index_;
  std::vector<double> col_value_;
  std::vector<int> row_start_, row_col_;
  std::vector<double> row_val_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;

  std::vector<double> lo_, up_, x_, cost_, d_, weight_, pi_;
  std::vector<state> st_;
  std::vector<int> head_, pos_of_;
  detail::sparse_lu lu_;

  std::size_t cap_ = 0;
  std::size_t iterations_ = 0;
  std::size_t refactorizations_ = 0;
  bool bland_ = false;
  bool used_bland_ = false;
  double best_objective_ = 0.0;
  std::size_t since_progress_ = 0;
  std::vector<double> ray_;
};

}  // namespace detail

}  // namespace leastcore

#endif  // LEASTCORE_REVISED_SIMPLEX_HPP
