#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "fracvar/errors.hpp"
#include "fracvar/problem.hpp"

namespace fracvar {

/// Flat "key = value" problem description; '#' starts a comment.
///
///   alpha = 0.5
///   a = 0
///   b = 1
///   lagrangian = builtin:ex7          # or an expression, optionally in double quotes
///   param.g = 1
///   param.l = 1
///   y_a = free                        # or a number
///   y_b = free
struct ProblemConfig {
  double alpha = 0.0;
  double a = 0.0;
  double b = 1.0;
  std::string lagrangian;
  Parameters parameters;
  EndpointCondition y_a = EndpointCondition::free_end();
  EndpointCondition y_b = EndpointCondition::free_end();

  bool is_builtin() const { return lagrangian.starts_with(builtin_prefix); }
  std::string_view builtin_name() const { return std::string_view(lagrangian).substr(builtin_prefix.size()); }

  /// Builtins take the interval and end-point conditions from the config as well.
  VariationalProblem problem(std::optional<double> alpha_override = std::nullopt) const {
    const FractionalOrder order(alpha_override.value_or(alpha));
    const Interval interval(a, b);
    if (!is_builtin()) return from_expression(lagrangian, interval, order, y_a, y_b, parameters);
    VariationalProblem p = builtin(builtin_name(), order, parameters);
    p.interval = interval;
    p.at_a = y_a;
    p.at_b = y_b;
    return p;
  }

  static constexpr std::string_view builtin_prefix = "builtin:";
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_real(std::string_view text, std::string_view what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: expected a finite number, got '{}'", what, text));
  }
  return v;
}

inline EndpointCondition parse_endpoint(std::string_view text, std::string_view what) {
  if (text == "free") return EndpointCondition::free_end();
  return EndpointCondition::fixed(parse_real(text, what));
}

/// Strips comments outside double quotes.
inline std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace detail

inline ProblemConfig parse_config(std::string_view text) {
  ProblemConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int line_no = 1; std::getline(in, raw); ++line_no) {
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected key = value", line_no));
    const std::string_view key = detail::trim(line.substr(0, eq));
    std::string_view value = detail::trim(line.substr(eq + 1));
    const std::string where = fmt::format("line {}: {}", line_no, key);
    if (key.empty()) throw ConfigError(fmt::format("line {}: missing key", line_no));
    if (!seen.emplace(key).second) throw ConfigError(fmt::format("{}: duplicate key", where));

    if (key == "alpha") {
      cfg.alpha = detail::parse_real(value, where);
    } else if (key == "a") {
      cfg.a = detail::parse_real(value, where);
    } else if (key == "b") {
      cfg.b = detail::parse_real(value, where);
    } else if (key == "y_a") {
      cfg.y_a = detail::parse_endpoint(value, where);
    } else if (key == "y_b") {
      cfg.y_b = detail::parse_endpoint(value, where);
    } else if (key == "lagrangian") {
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      if (value.empty()) throw ConfigError(fmt::format("{}: empty value", where));
      cfg.lagrangian = std::string(value);
    } else if (key.starts_with("param.") && key.size() > 6) {
      cfg.parameters[std::string(key.substr(6))] = detail::parse_real(value, where);
    } else {
      throw ConfigError(fmt::format("{}: unknown key", where));
    }
  }
  for (const char* required : {"alpha", "a", "b", "lagrangian"}) {
    if (!seen.contains(required)) throw ConfigError(fmt::format("missing required key '{}'", required));
  }
  (void)FractionalOrder(cfg.alpha);
  (void)Interval(cfg.a, cfg.b);
  if (cfg.is_builtin() && cfg.builtin_name() == "classical_ex7" && cfg.alpha != 1.0) {
    throw ConfigError("builtin:classical_ex7 requires alpha = 1");
  }
  return cfg;
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace fracvar
