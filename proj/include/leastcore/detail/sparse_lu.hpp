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

#ifndef LEASTCORE_DETAIL_SPARSE_LU_HPP
#define LEASTCORE_DETAIL_SPARSE_LU_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace leastcore::detail {

/// Sparse column given as parallel index/value arrays.
struct column_view {
  std::span<const int> index;
  std::span<const double> value;
};

/// LU factorization of a square sparse basis matrix with product-form
/// updates.
///
/// Rows are addressed by constraint index, columns by basis position.
/// ftran() maps a right-hand side indexed by row to a solution indexed by
/// position; btran() goes the other way. Pivots are chosen by a Markowitz
/// search over columns of increasing count with threshold partial pivoting,
/// so singleton rows and columns are eliminated first without fill.
class sparse_lu {
 public:
  struct outcome {
    /// Positions that received no pivot (empty when the matrix is regular).
    std::vector<int> bad_positions;
    /// Rows that received no pivot, same length as bad_positions.
    std::vector<int> free_rows;
  };

  outcome factorize(int m, std::span<const column_view> columns, double threshold = 0.01) {
    m_ = m;
    clear();
    outcome result;

    row_entries_.assign(m, {});
    col_rows_.assign(m, {});
    row_count_.assign(m, 0);
    col_count_.assign(m, 0);
    row_done_.assign(m, 0);
    col_done_.assign(m, 0);
    for (int p = 0; p < m; ++p) {
      const auto& c = columns[p];
      for (std::size_t t = 0; t < c.index.size(); ++t) {
        if (c.value[t] == 0.0) continue;
        const int r = c.index[t];
        row_entries_[r].push_back({p, c.value[t]});
        col_rows_[p].push_back(r);
      }
    }
    for (int r = 0; r < m; ++r) row_count_[r] = static_cast<int>(row_entries_[r].size());
    for (int p = 0; p < m; ++p) col_count_[p] = static_cast<int>(col_rows_[p].size());

    bucket_head_.assign(m + 2, -1);
    bucket_next_.assign(m, -1);
    bucket_prev_.assign(m, -1);
    for (int p = 0; p < m; ++p) bucket_insert(p);

    std::vector<int> scatter(m, -1);
    L_start_.push_back(0);
    U_start_.push_back(0);

    for (int k = 0; k < m; ++k) {
      auto [pr, pc] = choose_pivot(threshold);
      if (pr < 0) break;
      eliminate(pr, pc, scatter);
    }

    if (static_cast<int>(pivot_row_.size()) < m) {
      for (int p = 0; p < m; ++p) {
        if (!col_done_[p]) result.bad_positions.push_back(p);
      }
      for (int r = 0; r < m; ++r) {
        if (!row_done_[r]) result.free_rows.push_back(r);
      }
    }
    release_workspace();
    return result;
  }

  /// Solves B x = b in place; b indexed by row on entry, x by position on
  /// exit.
  void ftran(std::vector<double>& b) const {
    for (std::size_t k = 0; k < pivot_row_.size(); ++k) {
      const double v = b[pivot_row_[k]];
      if (v == 0.0) continue;
      for (auto t = L_start_[k]; t < L_start_[k + 1]; ++t) b[L_index_[t]] -= L_value_[t] * v;
    }
    work_.assign(m_, 0.0);
    for (std::size_t k = pivot_row_.size(); k-- > 0;) {
      double v = b[pivot_row_[k]];
      for (auto t = U_start_[k]; t < U_start_[k + 1]; ++t) v -= U_value_[t] * work_[U_index_[t]];
      work_[pivot_col_[k]] = v / diag_[k];
    }
    b.swap(work_);
    for (const auto& e : etas_) apply_eta(e, b);
  }

  /// Solves B^T y = c in place; c indexed by position on entry, y by row on
  /// exit.
  void btran(std::vector<double>& c) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) apply_eta_transposed(*it, c);
    work_.assign(m_, 0.0);
    // U^T z = c, z stored at the pivot row of each step.
    for (std::size_t k = 0; k < pivot_row_.size(); ++k) {
      const double z = c[pivot_col_[k]] / diag_[k];
      work_[pivot_row_[k]] = z;
      if (z == 0.0) continue;
      for (auto t = U_start_[k]; t < U_start_[k + 1]; ++t) c[U_index_[t]] -= U_value_[t] * z;
    }
    for (std::size_t k = pivot_row_.size(); k-- > 0;) {
      double v = work_[pivot_row_[k]];
      for (auto t = L_start_[k]; t < L_start_[k + 1]; ++t) v -= L_value_[t] * work_[L_index_[t]];
      work_[pivot_row_[k]] = v;
    }
    c.swap(work_);
  }

  /// Records the replacement of the column at `position` by a column whose
  /// ftran image is `alpha`.
  void update(int position, const std::vector<double>& alpha, double drop = 1e-14) {
    eta e;
    e.position = position;
    e.pivot = alpha[position];
    for (int p = 0; p < m_; ++p) {
      if (p != position && std::abs(alpha[p]) > drop) {
        e.index.push_back(p);
        e.value.push_back(alpha[p]);
      }
    }
    eta_nonzeros_ += e.index.size();
    etas_.push_back(std::move(e));
  }

  std::size_t eta_count() const noexcept { return etas_.size(); }
  std::size_t eta_nonzeros() const noexcept { return eta_nonzeros_; }
  std::size_t factor_nonzeros() const noexcept { return L_index_.size() + U_index_.size() + diag_.size(); }

 private:
  struct entry {
    int col;
    double value;
  };
  struct eta {
    int position = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };

  static void apply_eta(const eta& e, std::vector<double>& x) {
    const double xr = x[e.position] / e.pivot;
    x[e.position] = xr;
    if (xr == 0.0) return;
    for (std::size_t t = 0; t < e.index.size(); ++t) x[e.index[t]] -= e.value[t] * xr;
  }

  static void apply_eta_transposed(const eta& e, std::vector<double>& c) {
    double v = c[e.position];
    for (std::size_t t = 0; t < e.index.size(); ++t) v -= e.value[t] * c[e.index[t]];
    c[e.position] = v / e.pivot;
  }

  void clear() {
    pivot_row_.clear();
    pivot_col_.clear();
    diag_.clear();
    L_start_.clear();
    L_index_.clear();
    L_value_.clear();
    U_start_.clear();
    U_index_.clear();
    U_value_.clear();
    etas_.clear();
    eta_nonzeros_ = 0;
  }

  void release_workspace() {
    row_entries_.clear();
    col_rows_.clear();
    bucket_head_.clear();
    bucket_next_.clear();
    bucket_prev_.clear();
  }

  void bucket_insert(int p) {
    const int c = col_count_[p];
    bucket_prev_[p] = -1;
    bucket_next_[p] = bucket_head_[c];
    if (bucket_head_[c] >= 0) bucket_prev_[bucket_head_[c]] = p;
    bucket_head_[c] = p;
  }

  void bucket_remove(int p) {
    const int c = col_count_[p];
    if (bucket_prev_[p] >= 0) {
      bucket_next_[bucket_prev_[p]] = bucket_next_[p];
    } else {
      bucket_head_[c] = bucket_next_[p];
    }
    if (bucket_next_[p] >= 0) bucket_prev_[bucket_next_[p]] = bucket_prev_[p];
  }

  void set_col_count(int p, int count) {
    bucket_remove(p);
    col_count_[p] = count;
    bucket_insert(p);
  }

  double lookup(int r, int p) const {
    for (const auto& e : row_entries_[r]) {
      if (e.col == p) return e.value;
    }
    return 0.0;
  }

  std::pair<int, int> choose_pivot(double threshold) {
    constexpr double tiny = 1e-13;
    long best_cost = -1;
    int best_r = -1, best_c = -1;
    double best_abs = 0.0;
    int examined = 0;
    for (int count = 1; count <= m_; ++count) {
      if (best_cost >= 0 && best_cost <= static_cast<long>(count - 1) * (count - 1)) break;
      for (int p = bucket_head_[count]; p >= 0; p = bucket_next_[p]) {
        double col_max = 0.0;
        for (int r : col_rows_[p]) {
          if (!row_done_[r]) col_max = std::max(col_max, std::abs(lookup(r, p)));
        }
        if (col_max <= tiny) continue;
        for (int r : col_rows_[p]) {
          if (row_done_[r]) continue;
          const double a = std::abs(lookup(r, p));
          if (a < threshold * col_max || a <= tiny) continue;
          const long cost = static_cast<long>(row_count_[r] - 1) * (count - 1);
          if (best_cost < 0 || cost < best_cost || (cost == best_cost && a > best_abs)) {
            best_cost = cost;
            best_r = r;
            best_c = p;
            best_abs = a;
          }
        }
        if (best_cost >= 0 && ++examined >= 4) break;
      }
      if (best_cost >= 0 && examined >= 4) break;
    }
    return {best_r, best_c};
  }

  void eliminate(int pr, int pc, std::vector<int>& scatter) {
    bucket_remove(pc);
    col_done_[pc] = 1;
    row_done_[pr] = 1;

    double d = 0.0;
    const std::size_t u_begin = U_index_.size();
    for (const auto& e : row_entries_[pr]) {
      if (e.col == pc) {
        d = e.value;
        continue;
      }
      U_index_.push_back(e.col);
      U_value_.push_back(e.value);
      set_col_count(e.col, col_count_[e.col] - 1);
    }
    const std::size_t u_end = U_index_.size();

    for (int r : col_rows_[pc]) {
      if (row_done_[r]) continue;
      auto& row = row_entries_[r];
      double a = 0.0;
      for (std::size_t t = 0; t < row.size(); ++t) {
        if (row[t].col == pc) {
          a = row[t].value;
          row[t] = row.back();
          row.pop_back();
          break;
        }
      }
      --row_count_[r];
      if (a == 0.0) continue;
      const double l = a / d;
      L_index_.push_back(r);
      L_value_.push_back(l);
      for (std::size_t t = 0; t < row.size(); ++t) scatter[row[t].col] = static_cast<int>(t);
      for (std::size_t t = u_begin; t < u_end; ++t) {
        const int c = U_index_[t];
        const int slot = scatter[c];
        if (slot >= 0) {
          row[slot].value -= l * U_value_[t];
        } else {
          row.push_back({c, -l * U_value_[t]});
          col_rows_[c].push_back(r);
          ++row_count_[r];
          set_col_count(c, col_count_[c] + 1);
        }
      }
      for (const auto& e : row) scatter[e.col] = -1;
    }

    pivot_row_.push_back(pr);
    pivot_col_.push_back(pc);
    diag_.push_back(d);
    L_start_.push_back(L_index_.size());
    U_start_.push_back(U_index_.size());
  }

  int m_ = 0;
  std::vector<int> pivot_row_, pivot_col_;
  std::vector<double> diag_;
  std::vector<std::size_t> L_start_, U_start_;
  std::vector<int> L_index_, U_index_;
  std::vector<double> L_value_, U_value_;
  std::vector<eta> etas_;
  std::size_t eta_nonzeros_ = 0;
  mutable std::vector<double> work_;

  // factorization workspace
  std::vector<std::vector<entry>> row_entries_;
  std::vector<std::vector<int>> col_rows_;
  std::vector<int> row_count_, col_count_;
  std::vector<char> row_done_, col_done_;
  std::vector<int> bucket_head_, bucket_next_, bucket_prev_;
};

}  // namespace leastcore::detail

#endif  // LEASTCORE_DETAIL_SPARSE_LU_HPP
