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


// Command-line front end: solve, oracle, export, bench, regress, prop.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "leastcore/dag.hpp"
#include "leastcore/enumeration.hpp"
#include "leastcore/error.hpp"
#include "leastcore/experiments.hpp"
#include "leastcore/formulations.hpp"
#include "leastcore/games.hpp"
#include "leastcore/least_core.hpp"
#include "leastcore/lp_format.hpp"
#include "leastcore/oracle.hpp"
#include "leastcore/simplex.hpp"

namespace {

using namespace leastcore;
using nlohmann::json;

enum exit_code : int {
  exit_ok = 0,
  exit_input = 2,
  exit_solver = 3,
  exit_size = 4,
  exit_statistics = 5,
};

int exit_for(error_code code) {
  switch (code) {
    case error_code::size_cap_exceeded:
    case error_code::too_many_players:
    case error_code::exact_mode_cap_exceeded:
    case error_code::total_weight_cap_exceeded:
      return exit_size;
    case error_code::not_optimal:
    case error_code::role_metadata_missing:
    case error_code::numerical_breakdown:
      return exit_solver;
    case error_code::rank_deficient:
      return exit_statistics;
    default:
      return exit_input;
  }
}

struct global_flags {
  bool json = false;
  bool no_prune = false;
  bool exact = false;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  double time_limit = 0.0;

  pipeline_options pipeline() const {
    pipeline_options o;
    o.prune = !no_prune;
    o.solver.exact = exact;
    o.solver.time_limit = time_limit;
    return o;
  }
  double certify_tol() const { return tol.value_or(1e-9); }
  double prop_tol() const { return tol.value_or(1e-8); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error(error_code::syntax_error, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

any_game load_game(const std::string& path) {
  auto game = parse_game(read_file(path));
  std::visit([](const auto& g) { require_valid(g); }, game);
  return game;
}

layered_dag game_dag(const any_game& game, const global_flags& g) {
  auto dag = std::visit(
      [](const auto& x) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, weighted_voting_game>) {
          return build_dag(x);
        } else {
          return build_vector_dag(x);
        }
      },
      game);
  return g.no_prune ? dag : prune(dag);
}

json coalition_json(const coalition& s) {
  json out = json::array();
  for (auto i : s.members()) out.push_back(i + 1);
  return out;
}

json game_summary(const any_game& game) {
  return std::visit([](const auto& g) { return to_json(g); }, game);
}

std::string fmt(double v, int digits = 12) {
  std::ostringstream s;
  s << std::setprecision(digits) << std::fixed << v;
  return s.str();
}

// -- solve -------------------------------------------------------------------

int cmd_solve(const global_flags& g, const std::string& path, const std::string& dot_path) {
  const auto game = load_game(path);
  const auto dag = game_dag(game, g);
  if (!dot_path.empty()) {
    std::ofstream dot(dot_path);
    if (!dot) throw validation_error(error_code::syntax_error, "cannot write '" + dot_path + "'");
    dot << to_dot(dag);
  }
  auto opts = g.pipeline();
  opts.prune = false;  // already applied above
  const auto r = solve_least_core(dag, opts);
  const auto report = std::visit(
      [&](const auto& x) { return certify(x, r.epsilon_star, r.payoff, g.certify_tol()); }, game);
  const auto& d = r.diagnostics;

  if (g.json) {
    json out;
    out["command"] = "solve";
    out["game"] = game_summary(game);
    out["epsilon"] = r.epsilon_star;
    out["epsilon_exact"] = r.exact_epsilon ? json(r.exact_epsilon->to_string()) : json(nullptr);
    out["payoff"] = r.payoff;
    if (!r.exact_payoff.empty()) {
      json ex = json::array();
      for (const auto& v : r.exact_payoff) ex.push_back(v.to_string());
      out["payoff_exact"] = ex;
    }
    out["tight_coalition"] = coalition_json(r.tight_witness);
    out["min_winning_payoff"] = r.min_winning_payoff;
    out["certified"] = report.pass;
    out["certificate"] = {{"sum_residual", report.sum_residual},
                          {"negativity", report.negativity},
                          {"coalition_gap", report.worst_coalition_gap},
                          {"tolerance", report.tolerance}};
    out["model"] = {{"rows", d.rows},
                    {"columns", d.columns},
                    {"nonzeros", d.nonzeros},
                    {"graph_vertices", dag.vertex_count()},
                    {"pruned", !g.no_prune}};
    out["solver"] = {{"iterations", d.iterations},
                     {"phase_one_iterations", d.phase_one_iterations},
                     {"used_bland", d.used_bland},
                     {"primal_violation", d.primal_violation},
                     {"dual_violation", d.dual_violation},
                     {"exact", g.exact}};
    out["timings"] = {{"build_seconds", d.build_seconds}, {"solve_seconds", d.solve_seconds}};
    std::cout << out.dump(2) << '\n';
    return exit_ok;
  }

  std::cout << "epsilon* = " << fmt(r.epsilon_star) << '\n';
  if (r.exact_epsilon) std::cout << "epsilon* (exact) = " << r.exact_epsilon->to_string() << '\n';
  std::cout << "payoff:\n";
  for (std::size_t i = 0; i < r.payoff.size(); ++i) {
    std::cout << "  x" << i + 1 << " = " << fmt(r.payoff[i]);
    if (i < r.exact_payoff.size()) std::cout << "  (" << r.exact_payoff[i].to_string() << ')';
    std::cout << '\n';
  }
  std::cout << "tight coalition: " << r.tight_witness.to_string() << "  payoff " << fmt(r.min_winning_payoff)
            << '\n';
  std::cout << "certificate: " << (report.pass ? "pass" : "FAIL") << " at tol " << report.tolerance
            << " (sum residual " << report.sum_residual << ", negativity " << report.negativity
            << ", coalition gap " << report.worst_coalition_gap << ")\n";
  std::cout << "model: " << d.rows << " rows, " << d.columns << " columns, " << d.nonzeros
            << " nonzeros; graph " << dag.vertex_count() << " vertices"
            << (g.no_prune ? " (unpruned)" : "") << '\n';
  std::cout << "solver: " << d.iterations << " iterations (" << d.phase_one_iterations << " phase one)"
            << (d.used_bland ? ", Bland fallback used" : "") << '\n';
  std::cout << "time: build " << fmt(d.build_seconds, 3) << " s, solve " << fmt(d.solve_seconds, 3) << " s\n";
  return exit_ok;
}

// -- oracle ------------------------------------------------------------------

int cmd_oracle(const global_flags& g, const std::string& path) {
  const auto game = load_game(path);
  const auto bf = std::visit([](const auto& x) { return least_core_bruteforce(x); }, game);
  const auto& lc = bf.least_core;

  // Cross-check against the graph pipeline.
  std::optional<double> pipeline_eps;
  std::string pipeline_error;
  try {
    const auto opts = g.pipeline();
    pipeline_eps = std::visit([&](const auto& x) { return solve_least_core(x, opts).epsilon_star; }, game);
  } catch (const error& e) {
    pipeline_error = e.what();
  }

  if (g.json) {
    json out;
    out["command"] = "oracle";
    out["game"] = game_summary(game);
    out["epsilon"] = lc.epsilon_star;
    out["epsilon_exact"] = lc.exact_epsilon ? json(lc.exact_epsilon->to_string()) : json(nullptr);
    out["payoff"] = lc.payoff;
    json mw = json::array();
    for (const auto& s : bf.minimal_winning) mw.push_back(coalition_json(s));
    out["minimal_winning"] = mw;
    out["pipeline_epsilon"] = pipeline_eps ? json(*pipeline_eps) : json(nullptr);
    out["difference"] = pipeline_eps ? json(std::abs(*pipeline_eps - lc.epsilon_star)) : json(nullptr);
    if (!pipeline_error.empty()) out["pipeline_error"] = pipeline_error;
    std::cout << out.dump(2) << '\n';
    return exit_ok;
  }

  std::cout << "epsilon* = " << (lc.exact_epsilon ? lc.exact_epsilon->to_string() : fmt(lc.epsilon_star))
            << "  (" << fmt(lc.epsilon_star) << ")\n";
  std::cout << "payoff:";
  for (std::size_t i = 0; i < lc.payoff.size(); ++i) {
    std::cout << ' ' << (i < lc.exact_payoff.size() ? lc.exact_payoff[i].to_string() : fmt(lc.payoff[i]));
  }
  std::cout << '\n' << bf.minimal_winning.size() << " minimal winning coalitions:\n";
  for (const auto& s : bf.minimal_winning) std::cout << "  " << s.to_string() << '\n';
  if (pipeline_eps) {
    std::cout << "graph pipeline epsilon* = " << fmt(*pipeline_eps) << ", difference "
              << std::abs(*pipeline_eps - lc.epsilon_star) << '\n';
  } else {
    std::cout << "graph pipeline failed: " << pipeline_error << '\n';
  }
  return exit_ok;
}

// -- export ------------------------------------------------------------------

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const auto t = std::string(detail::trim(token));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
      throw syntax_error("bad number '" + t + "' in --x");
    }
    out.push_back(v);
  }
  return out;
}

int cmd_export(const global_flags& g, const std::string& path, const std::string& out_path,
               const std::string& formulation, const std::string& x_text) {
  const auto game = load_game(path);
  lp_model model;
  if (formulation == "p1") {
    model = std::visit([](const auto& x) { return build_p1(x); }, game);
  } else if (formulation == "p2") {
    model = build_p2(game_dag(game, g));
  } else {
    if (x_text.empty()) throw validation_error(error_code::dimension_mismatch, "--formulation flow needs --x");
    const auto x = parse_vector(x_text);
    model = build_flow_lp(game_dag(game, g), x);
  }
  std::ofstream out(out_path);
  if (!out) throw validation_error(error_code::syntax_error, "cannot write '" + out_path + "'");
  out << export_lp_file(model);
  if (g.json) {
    json j{{"command", "export"},
           {"formulation", formulation},
           {"path", out_path},
           {"rows", model.constraint_count()},
           {"columns", model.variable_count()},
           {"nonzeros", model.nonzero_count()}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "wrote " << out_path << ": " << model.constraint_count() << " rows, " << model.variable_count()
              << " columns, " << model.nonzero_count() << " nonzeros\n";
  }
  return exit_ok;
}

// -- bench -------------------------------------------------------------------

int cmd_bench(const global_flags& g, const std::vector<int>& ns, const std::vector<std::int64_t>& us,
              int instances, const std::string& out_path, bool mask_times) {
  bench_config cfg;
  cfg.players = ns;
  cfg.upper_bounds = us;
  cfg.instances = instances;
  cfg.seed = g.seed;
  cfg.pipeline = g.pipeline();
  const auto rows = run_bench(cfg, [&](const bench_row& r) {
    if (!r.ok()) std::cerr << "instance seed " << r.seed << " (n=" << r.n << ", U=" << r.upper << ") failed: " << r.status << '\n';
  });
  if (out_path == "-") {
    write_bench_csv(std::cout, rows, mask_times);
  } else {
    std::ofstream out(out_path);
    if (!out) throw validation_error(error_code::syntax_error, "cannot write '" + out_path + "'");
    write_bench_csv(out, rows, mask_times);
  }
  const auto cells = summarize_bench(rows);
  std::ostream& summary = out_path == "-" ? std::cerr : std::cout;
  if (g.json) {
    json arr = json::array();
    for (const auto& c : cells) {
      arr.push_back({{"n", c.n},
                     {"U", c.upper},
                     {"instances", c.instances},
                     {"failures", c.failures},
                     {"mean_epsilon", c.mean_epsilon},
                     {"mean_build_seconds", c.mean_build_seconds},
                     {"mean_solve_seconds", c.mean_solve_seconds}});
    }
    summary << json{{"command", "bench"}, {"seed", g.seed}, {"cells", arr}}.dump(2) << '\n';
  } else {
    summary << "n,U,instances,failures,mean_epsilon,mean_build_seconds,mean_solve_seconds\n";
    for (const auto& c : cells) {
      summary << c.n << ',' << c.upper << ',' << c.instances << ',' << c.failures << ','
              << detail::format_double(c.mean_epsilon) << ',' << detail::format_double(c.mean_build_seconds)
              << ',' << detail::format_double(c.mean_solve_seconds) << '\n';
    }
  }
  return exit_ok;
}

// -- regress -----------------------------------------------------------------

int cmd_regress(const global_flags& g, const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw validation_error(error_code::syntax_error, "cannot read '" + csv_path + "'");
  const auto rows = read_bench_csv(in);
  const auto fit = fit_timing_model(rows);
  if (g.json) {
    json out{{"command", "regress"},
             {"beta", fit.beta},
             {"r_squared", fit.r_squared},
             {"observations", fit.observations},
             {"distinct_points", fit.distinct_points}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << std::setprecision(6) << "ln(time) = " << fit.beta[0] << " + " << fit.beta[1] << " ln n + "
              << fit.beta[2] << " ln W\n"
              << "beta0 = " << fit.beta[0] << "\nbeta1 = " << fit.beta[1] << "\nbeta2 = " << fit.beta[2]
              << "\nR^2 = " << fit.r_squared << "\nobservations = " << fit.observations
              << " (" << fit.distinct_points << " distinct (n, W) points)\n";
  }
  return exit_ok;
}

// -- prop --------------------------------------------------------------------

int cmd_prop(const global_flags& g, const std::vector<int>& ns, int vectors, std::int64_t weight_max) {
  prop_config cfg;
  cfg.players = ns;
  cfg.vectors = vectors;
  cfg.weight_max = weight_max;
  cfg.seed = g.seed;
  cfg.tol = g.prop_tol();
  cfg.pipeline = g.pipeline();
  if (vectors < 1 || weight_max < 1) {
    throw validation_error(error_code::empty_player_set, "--vectors and --weight-max must be positive");
  }
  if (!g.json) std::cout << "n,vectors,instances,proportional,non_proportional,skipped,hard_errors,ratio_percent\n";
  const auto rows = run_prop(cfg, [&](const prop_row& r) {
    if (g.json) return;
    std::cout << r.n << ',' << r.vectors << ',' << r.instances << ',' << r.proportional << ','
              << r.non_proportional << ',' << r.skipped << ',' << r.hard_errors << ','
              << std::fixed << std::setprecision(2) << r.ratio_percent() << std::defaultfloat << '\n'
              << std::flush;
  });
  if (g.json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"n", r.n},
                     {"vectors", r.vectors},
                     {"instances", r.instances},
                     {"proportional", r.proportional},
                     {"non_proportional", r.non_proportional},
                     {"skipped", r.skipped},
                     {"hard_errors", r.hard_errors},
                     {"ratio_percent", r.ratio_percent()}});
    }
    std::cout << json{{"command", "prop"}, {"seed", g.seed}, {"rows", arr}}.dump(2) << '\n';
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least core of weighted voting games"};
  app.require_subcommand(1);
  app.fallthrough();

  global_flags g;
  app.add_flag("--json", g.json, "Machine-readable JSON output");
  app.add_flag("--no-prune", g.no_prune, "Keep graph vertices that reach no target");
  app.add_flag("--exact", g.exact, "Solve with the rational simplex");
  app.add_option("--tol", g.tol, "Tolerance for certification (default 1e-9) and proportionality (default 1e-8)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for bench and prop");
  app.add_option("--time-limit", g.time_limit, "Wall-clock limit per LP solve in seconds (0 = none)")
      ->check(CLI::NonNegativeNumber);

  std::string game_path, out_path, dot_path, formulation = "p2", x_text, csv_path, bench_out = "bench.csv";
  auto* solve = app.add_subcommand("solve", "Least core via the pseudo-polynomial LP");
  solve->add_option("game", game_path, "Game file (text or JSON)")->required();
  solve->add_option("--dot", dot_path, "Write the (pruned) graph in DOT format");

  auto* oracle = app.add_subcommand("oracle", "Least core by enumerating minimal winning coalitions (n <= 20)");
  oracle->add_option("game", game_path, "Game file")->required();

  auto* exp = app.add_subcommand("export", "Write an LP model in CPLEX LP format");
  exp->add_option("game", game_path, "Game file")->required();
  exp->add_option("out", out_path, "Output .lp path")->required();
  exp->add_option("--formulation", formulation, "p1, p2 or flow")->check(CLI::IsMember({"p1", "p2", "flow"}));
  exp->add_option("--x", x_text, "Comma-separated payoff vector for the flow LP");

  std::vector<int> bench_n{40, 60, 80, 100, 120};
  std::vector<std::int64_t> bench_u{40, 60, 80, 100, 120};
  int instances = 20;
  bool mask_times = false;
  auto* bench = app.add_subcommand("bench", "Timing sweep over random (n, U) cells");
  bench->add_option("--n", bench_n, "Player counts")->delimiter(',');
  bench->add_option("--U", bench_u, "Weight upper bounds")->delimiter(',');
  bench->add_option("--instances", instances, "Games per cell");
  bench->add_option("--out", bench_out, "Per-instance CSV path ('-' for stdout)");
  bench->add_flag("--mask-times", mask_times, "Write 0 for timings (byte-reproducible CSV)");

  auto* regress = app.add_subcommand("regress", "Fit ln(time) = b0 + b1 ln n + b2 ln W to a bench CSV");
  regress->add_option("csv", csv_path, "CSV written by bench")->required();

  std::vector<int> prop_n{5, 8, 10, 12, 15, 18};
  int vectors = 100;
  std::int64_t weight_max = 20;
  auto* prop = app.add_subcommand("prop", "How often the computed least-core payoff is proportional to the weights");
  prop->add_option("--n", prop_n, "Player counts")->delimiter(',');
  prop->add_option("--vectors", vectors, "Weight vectors per n");
  prop->add_option("--weight-max", weight_max, "Weights are uniform in 1..weight-max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_input;
  }

  try {
    if (*solve) return cmd_solve(g, game_path, dot_path);
    if (*oracle) return cmd_oracle(g, game_path);
    if (*exp) return cmd_export(g, game_path, out_path, formulation, x_text);
    if (*bench) return cmd_bench(g, bench_n, bench_u, instances, bench_out, mask_times);
    if (*regress) return cmd_regress(g, csv_path);
    if (*prop) return cmd_prop(g, prop_n, vectors, weight_max);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_solver;
  }
  return exit_input;
}
