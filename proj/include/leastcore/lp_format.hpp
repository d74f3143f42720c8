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

#ifndef LEASTCORE_LP_FORMAT_HPP
#define LEASTCORE_LP_FORMAT_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "leastcore/lp_model.hpp"

namespace leastcore {

/// Maps a model name to an identifier every common LP-format reader accepts:
/// ')' and '}' are dropped, any other character outside [A-Za-z0-9_.] becomes
/// '_', and a leading digit, '.', or exponent-like "e<digit>" gets an 'n'
/// prefix. "y(2,7)" becomes "y_2_7".
inline std::string lp_identifier(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char ch : name) {
    if (ch == ')' || ch == '}') continue;
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '.';
    out += ok ? ch : '_';
  }
  if (out.empty()) return "n";
  const bool digit_start = (out[0] >= '0' && out[0] <= '9') || out[0] == '.';
  const bool exponent_like =
      (out[0] == 'e' || out[0] == 'E') && out.size() > 1 && out[1] >= '0' && out[1] <= '9';
  if (digit_start || exponent_like) out.insert(out.begin(), 'n');
  return out;
}

namespace detail {

/// Shortest decimal form that reads back to the same double.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

/// Accumulates tokens into lines no longer than the limit; continuation
/// lines start with a space.
class line_writer {
 public:
  explicit line_writer(std::string& out, std::size_t limit = 255) : out_(out), limit_(limit) {}

  void begin(std::string_view head) {
    line_.assign(head);
  }
  void token(std::string_view tok) {
    if (line_.size() + 1 + tok.size() > limit_ && !line_.empty()) {
      flush();
      line_ = " ";
      line_ += tok;
      return;
    }
    if (!line_.empty()) line_ += ' ';
    line_ += tok;
  }
  void flush() {
    if (line_.empty()) return;
    out_ += line_;
    out_ += '\n';
    line_.clear();
  }

 private:
  std::string& out_;
  std::size_t limit_;
  std::string line_;
};

inline void write_terms(line_writer& w, std::span<const lp_term> terms,
                        const std::vector<std::string>& names) {
  bool first = true;
  for (const auto& t : terms) {
    const double a = std::abs(t.coef);
    std::string tok;
    if (t.coef < 0) {
      tok = "- ";
    } else if (!first) {
      tok = "+ ";
    }
    if (a != 1.0) tok += format_number(a) + " ";
    tok += names[t.var];
    w.token(tok);
    first = false;
  }
}

inline std::vector<std::string> unique_identifiers(std::size_t count,
                                                   auto&& name_of) {
  std::vector<std::string> out(count);
  std::unordered_set<std::string> used;
  for (std::size_t i = 0; i < count; ++i) {
    auto base = lp_identifier(name_of(i));
    auto id = base;
    for (std::size_t k = 1; used.count(id); ++k) id = base + "_" + std::to_string(k);
    used.insert(id);
    out[i] = std::move(id);
  }
  return out;
}

}  // namespace detail

/// Serializes a model in the CPLEX "LP format" dialect. Output is a pure
/// function of the model: rows keep their construction order, free
/// variables are declared in the Bounds section, and lines stay within 255
/// characters.
inline std::string export_lp_file(const lp_model& model) {
  const auto vars = detail::unique_identifiers(
      model.variable_count(), [&](std::size_t j) { return std::string_view(model.variable(j).name); });
  const auto rows = detail::unique_identifiers(
      model.constraint_count(), [&](std::size_t i) { return model.row(i).name; });

  std::string out;
  out += "\\ leastcore LP export: " + std::to_string(model.variable_count()) + " variables, " +
         std::to_string(model.constraint_count()) + " rows\n";
  out += model.sense() == objective_sense::minimize ? "Minimize\n" : "Maximize\n";
  detail::line_writer w(out);
  w.begin(" obj:");
  if (model.objective().empty()) {
    if (model.variable_count() > 0) w.token("0 " + vars[0]);
  } else {
    detail::write_terms(w, model.objective(), vars);
  }
  w.flush();

  out += "Subject To\n";
  std::vector<char> used(model.variable_count(), 0);
  for (const auto& t : model.objective()) used[t.var] = 1;
  for (std::size_t i = 0; i < model.constraint_count(); ++i) {
    const auto row = model.row(i);
    w.begin(" " + rows[i] + ":");
    if (row.terms.empty()) {
      w.token("0 " + (model.variable_count() > 0 ? vars[0] : std::string("x")));
    } else {
      detail::write_terms(w, row.terms, vars);
    }
    for (const auto& t : row.terms) used[t.var] = 1;
    const char* op = row.rel == relation::less_equal ? "<=" : row.rel == relation::greater_equal ? ">=" : "=";
    w.token(op);
    w.token(detail::format_number(row.rhs));
    w.flush();
  }

  out += "Bounds\n";
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    const auto& v = model.variable(j);
    const auto& id = vars[j];
    const bool lo = std::isfinite(v.lower), up = std::isfinite(v.upper);
    if (!lo && !up) {
      out += " " + id + " free\n";
    } else if (lo && up && v.lower == v.upper) {
      out += " " + id + " = " + detail::format_number(v.lower) + "\n";
    } else if (lo && up) {
      out += " " + detail::format_number(v.lower) + " <= " + id + " <= " +
             detail::format_number(v.upper) + "\n";
    } else if (!lo) {
      out += " -inf <= " + id + " <= " + detail::format_number(v.upper) + "\n";
    } else if (v.lower != 0.0 || !used[j]) {
      out += " " + id + " >= " + detail::format_number(v.lower) + "\n";
    }
  }
  out += "End\n";
  return out;
}

}  // namespace leastcore

#endif  // LEASTCORE_LP_FORMAT_HPP
