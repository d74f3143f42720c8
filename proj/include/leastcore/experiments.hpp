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


#ifndef LEASTCORE_EXPERIMENTS_HPP
#define LEASTCORE_EXPERIMENTS_HPP

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "leastcore/error.hpp"
#include "leastcore/games.hpp"
#include "leastcore/least_core.hpp"
#include "leastcore/oracle.hpp"

namespace leastcore {

// -- random instances ------------------------------------------------------

/// Seedable 64-bit source for the experiment harness.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded draws use rejection sampling on the raw 64-bit output
/// rather than std::uniform_int_distribution, whose mapping is left to the
/// library vendor; together this makes every generated instance identical
/// across platforms and standard libraries.
class random_source {
 public:
  explicit random_source(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi]. Requires lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next());
    const std::uint64_t range = span + 1;
    // Largest multiple of range that fits; values above it are redrawn.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % range);
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer applied to base + index; gives every instance its own
/// seed so that a single row of a sweep can be regenerated in isolation.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// n weights drawn uniformly from {1, ..., upper}.
inline std::vector<std::int64_t> random_weights(random_source& rng, int n, std::int64_t upper) {
  std::vector<std::int64_t> w(static_cast<std::size_t>(n));
  for (auto& v : w) v = rng.uniform(1, upper);
  return w;
}

/// round(0.9 * total) with halves rounded up, in exact integer arithmetic.
inline std::int64_t ninety_percent_quota(std::int64_t total) { return (9 * total + 5) / 10; }

/// The benchmark instance for one seed: weights uniform in {1..upper} and
/// quota ninety_percent_quota(W).
inline weighted_voting_game bench_instance(std::uint64_t seed, int n, std::int64_t upper) {
  random_source rng(seed);
  auto w = random_weights(rng, n, upper);
  std::int64_t total = 0;
  for (auto v : w) total += v;
  return weighted_voting_game(ninety_percent_quota(total), std::move(w));
}

// -- CSV helpers -----------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                        : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(f.begin());
  }
  return out;
}

template <class T>
T parse_field(const std::string& text, std::string_view what, std::size_t line) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw syntax_error("line " + std::to_string(line) + ": bad " + std::string(what) + " '" + text + "'");
  }
  return value;
}

}  // namespace detail

// -- benchmark -------------------------------------------------------------

struct bench_config {
  std::vector<int> players{40, 60, 80, 100, 120};
  std::vector<std::int64_t> upper_bounds{40, 60, 80, 100, 120};
  int instances = 20;
  std::uint64_t seed = 1;
  pipeline_options pipeline;

  void validate() const {
    if (players.empty() || upper_bounds.empty()) {
      throw validation_error(error_code::empty_player_set, "bench needs at least one n and one U");
    }
    for (int n : players) {
      if (n < 1) throw validation_error(error_code::empty_player_set, "n must be at least 1");
    }
    for (auto u : upper_bounds) {
      if (u < 1) throw validation_error(error_code::negative_weight, "U must be at least 1");
    }
    if (instances < 1) {
      throw validation_error(error_code::empty_player_set, "instances must be at least 1");
    }
  }
};

struct bench_row {
  std::uint64_t seed = 0;
  int n = 0;
  std::int64_t upper = 0;
  std::int64_t total = 0;
  std::int64_t quota = 0;
  double epsilon = 0.0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  /// "ok", or the error name for a failed instance.
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct bench_cell {
  int n = 0;
  std::int64_t upper = 0;
  std::size_t instances = 0;
  std::size_t failures = 0;
  double mean_epsilon = 0.0;
  double mean_build_seconds = 0.0;
  double mean_solve_seconds = 0.0;
};

/// Runs every (n, U) cell in the order given, `instances` games per cell.
/// Instance i of cell (n, U) uses seed derive_seed(derive_seed(derive_seed(
/// seed, n), U), i). Failures are recorded in the row and do not stop the
/// sweep. `on_row` is called after each instance.
inline std::vector<bench_row> run_bench(const bench_config& cfg,
                                        const std::function<void(const bench_row&)>& on_row = {}) {
  cfg.validate();
  std::vector<bench_row> rows;
  for (int n : cfg.players) {
    for (auto upper : cfg.upper_bounds) {
      const auto cell_seed = derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(n)),
                                         static_cast<std::uint64_t>(upper));
      for (int i = 0; i < cfg.instances; ++i) {
        bench_row row;
        row.seed = derive_seed(cell_seed, static_cast<std::uint64_t>(i));
        row.n = n;
        row.upper = upper;
        const auto game = bench_instance(row.seed, n, upper);
        row.total = game.total_weight();
        row.quota = game.quota();
        try {
          const auto r = solve_least_core(game, cfg.pipeline);
          row.epsilon = r.epsilon_star;
          row.build_seconds = r.diagnostics.build_seconds;
          row.solve_seconds = r.diagnostics.solve_seconds;
        } catch (const error& e) {
          row.status = std::string(to_string(e.code()));
        }
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// Per-cell means over the successful instances, cells in first-seen order.
inline std::vector<bench_cell> summarize_bench(const std::vector<bench_row>& rows) {
  std::vector<bench_cell> cells;
  std::map<std::pair<int, std::int64_t>, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, fresh] = index.try_emplace({r.n, r.upper}, cells.size());
    if (fresh) cells.push_back({r.n, r.upper});
    auto& c = cells[it->second];
    ++c.instances;
    if (!r.ok()) {
      ++c.failures;
      continue;
    }
    c.mean_epsilon += r.epsilon;
    c.mean_build_seconds += r.build_seconds;
    c.mean_solve_seconds += r.solve_seconds;
  }
  for (auto& c : cells) {
    const auto good = c.instances - c.failures;
    if (good == 0) continue;
    c.mean_epsilon /= static_cast<double>(good);
    c.mean_build_seconds /= static_cast<double>(good);
    c.mean_solve_seconds /= static_cast<double>(good);
  }
  return cells;
}

inline constexpr std::string_view bench_csv_header =
    "seed,n,U,W,quota,epsilon,build_seconds,solve_seconds,status";

/// Writes the per-instance CSV. With `mask_times` the two timing columns are
/// written as 0 so that repeated runs produce byte-identical files.
inline void write_bench_csv(std::ostream& out, const std::vector<bench_row>& rows,
                            bool mask_times = false) {
  out << bench_csv_header << '\n';
  for (const auto& r : rows) {
    out << r.seed << ',' << r.n << ',' << r.upper << ',' << r.total << ',' << r.quota << ','
        << (r.ok() ? detail::format_double(r.epsilon) : std::string()) << ','
        << (mask_times ? "0" : detail::format_double(r.build_seconds)) << ','
        << (mask_times ? "0" : detail::format_double(r.solve_seconds)) << ',' << r.status << '\n';
  }
}

/// Reads a CSV written by write_bench_csv. Columns are located by header
/// name; extra columns are ignored.
inline std::vector<bench_row> read_bench_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = detail::split_csv_line(line);
    break;
  }
  if (header.empty()) throw syntax_error("empty CSV");
  auto column = [&](std::string_view name, bool required) -> int {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    if (required) throw syntax_error("CSV lacks column '" + std::string(name) + "'");
    return -1;
  };
  const int c_seed = column("seed", false), c_n = column("n", true), c_u = column("U", false),
            c_w = column("W", true), c_q = column("quota", false), c_eps = column("epsilon", false),
            c_build = column("build_seconds", true), c_solve = column("solve_seconds", true),
            c_status = column("status", false);

  std::vector<bench_row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != header.size()) {
      throw syntax_error("line " + std::to_string(line_no) + ": expected " +
                         std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    }
    bench_row r;
    if (c_seed >= 0) r.seed = detail::parse_field<std::uint64_t>(f[c_seed], "seed", line_no);
    r.n = detail::parse_field<int>(f[c_n], "n", line_no);
    if (c_u >= 0) r.upper = detail::parse_field<std::int64_t>(f[c_u], "U", line_no);
    r.total = detail::parse_field<std::int64_t>(f[c_w], "W", line_no);
    if (c_q >= 0) r.quota = detail::parse_field<std::int64_t>(f[c_q], "quota", line_no);
    if (c_status >= 0) r.status = f[c_status];
    if (c_eps >= 0 && r.ok()) r.epsilon = detail::parse_field<double>(f[c_eps], "epsilon", line_no);
    r.build_seconds = detail::parse_field<double>(f[c_build], "build_seconds", line_no);
    r.solve_seconds = detail::parse_field<double>(f[c_solve], "solve_seconds", line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

// -- timing regression -----------------------------------------------------

struct regression_result {
  /// Intercept, ln n coefficient, ln W coefficient.
  std::array<double, 3> beta{};
  double r_squared = 0.0;
  std::size_t observations = 0;
  std::size_t distinct_points = 0;
};

struct timing_observation {
  double n = 0.0;
  double total_weight = 0.0;
  double seconds = 0.0;
};

/// Ordinary least squares of ln(seconds) on [1, ln n, ln W].
///
/// Throws statistics_error when the design has rank below 3 (for example
/// fewer than three distinct (n, W) points, or points on a line in the log
/// plane) or when a time is not positive.
inline regression_result fit_timing_model(const std::vector<timing_observation>& obs) {
  std::set<std::pair<double, double>> points;
  for (const auto& o : obs) {
    if (!(o.seconds > 0.0) || !(o.n > 0.0) || !(o.total_weight > 0.0)) {
      throw statistics_error(error_code::rank_deficient,
                             "times, n and W must be positive to take logarithms");
    }
    points.insert({o.n, o.total_weight});
  }
  regression_result out;
  out.observations = obs.size();
  out.distinct_points = points.size();
  if (points.size() < 3) {
    throw statistics_error(error_code::rank_deficient,
                           "need at least 3 distinct (n, W) points, got " +
                               std::to_string(points.size()));
  }
  const auto m = static_cast<Eigen::Index>(obs.size());
  Eigen::MatrixXd X(m, 3);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& o = obs[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    X(i, 1) = std::log(o.n);
    X(i, 2) = std::log(o.total_weight);
    y(i) = std::log(o.seconds);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    throw statistics_error(error_code::rank_deficient, "design matrix [1, ln n, ln W] is rank deficient");
  }
  const Eigen::VectorXd b = qr.solve(y);
  for (int k = 0; k < 3; ++k) out.beta[static_cast<std::size_t>(k)] = b(k);
  const Eigen::VectorXd resid = y - X * b;
  const double ss_res = resid.squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res <= 1e-24 ? 1.0 : 0.0);
  return out;
}

/// Fits the successful rows of a benchmark; time = build + solve seconds.
inline regression_result fit_timing_model(const std::vector<bench_row>& rows) {
  std::vector<timing_observation> obs;
  for (const auto& r : rows) {
    if (!r.ok()) continue;
    obs.push_back({static_cast<double>(r.n), static_cast<double>(r.total),
                   r.build_seconds + r.solve_seconds});
  }
  return fit_timing_model(obs);
}

// -- proportionality sweep -------------------------------------------------

struct prop_config {
  std::vector<int> players{5, 8, 10, 12, 15, 18};
  /// Weight vectors drawn per n; each is tried with every admissible quota.
  int vectors = 100;
  std::int64_t weight_max = 20;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  pipeline_options pipeline;
};

struct prop_row {
  int n = 0;
  std::size_t vectors = 0;
  /// (weights, quota) pairs solved.
  std::size_t instances = 0;
  std::size_t proportional = 0;
  std::size_t non_proportional = 0;
  /// Instances whose solve failed; excluded from the ratio.
  std::size_t skipped = 0;
  /// Proportional results that did not certify at the computed eps*.
  std::size_t hard_errors = 0;

  /// Percentage of proportional results among solved instances (100 when
  /// nothing was solved).
  double ratio_percent() const {
    const auto solved = proportional + non_proportional;
    return solved == 0 ? 100.0 : 100.0 * static_cast<double>(proportional) / static_cast<double>(solved);
  }
};

/// Integer quotas q with W/4 <= q <= 3W/4.
inline std::pair<std::int64_t, std::int64_t> prop_quota_range(std::int64_t total) {
  return {(total + 3) / 4, (3 * total) / 4};
}

/// For every n: `vectors` weight vectors with w_i uniform in {1..weight_max}
/// (vector v uses seed derive_seed(derive_seed(seed, n), v)), each solved
/// through P2 for every quota in prop_quota_range(W), and the returned payoff
/// tested against w / W.
inline std::vector<prop_row> run_prop(const prop_config& cfg,
                                      const std::function<void(const prop_row&)>& on_row = {}) {
  std::vector<prop_row> out;
  for (int n : cfg.players) {
    if (n < 1) throw validation_error(error_code::empty_player_set, "n must be at least 1");
    prop_row row;
    row.n = n;
    const auto n_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(n));
    for (int v = 0; v < cfg.vectors; ++v) {
      random_source rng(derive_seed(n_seed, static_cast<std::uint64_t>(v)));
      const auto w = random_weights(rng, n, cfg.weight_max);
      std::int64_t total = 0;
      for (auto x : w) total += x;
      ++row.vectors;
      const auto [q_lo, q_hi] = prop_quota_range(total);
      for (auto q = q_lo; q <= q_hi; ++q) {
        const weighted_voting_game game(q, w);
        ++row.instances;
        least_core_result r;
        try {
          r = solve_least_core(game, cfg.pipeline);
        } catch (const error&) {
          ++row.skipped;
          continue;
        }
        if (proportionality_check(game, r.payoff, cfg.tol)) {
          ++row.proportional;
          const auto report = certify(game, r.epsilon_star, proportional_payoff(game), 1e-9);
          if (!report.pass) ++row.hard_errors;
        } else {
          ++row.non_proportional;
        }
      }
    }
    if (on_row) on_row(row);
    out.push_back(row);
  }
  return out;
}

}  // namespace leastcore

#endif  // LEASTCORE_EXPERIMENTS_HPP
