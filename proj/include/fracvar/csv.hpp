#pragma once

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fracvar/config.hpp"
#include "fracvar/errors.hpp"
#include "fracvar/functional.hpp"

namespace fracvar::csv {

inline std::string number(double v) { return fmt::format("{:.17g}", v); }

/// "x,y,z" with z = y^(alpha), one row per grid node.
inline void write_trajectory(std::ostream& out, const Trajectory& tr) {
  out << "x,y,z\n";
  for (std::size_t i = 0; i <= tr.y.intervals(); ++i) {
    out << number(tr.y.node(i)) << ',' << number(tr.y[i]) << ',' << number(tr.z[i]) << '\n';
  }
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto comma = line.find(',');
    out.push_back(detail::trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) return out;
    line.remove_prefix(comma + 1);
  }
}

/// Reads an "x,y[,z]" candidate; the x column must be the uniform grid over `interval`.
inline GridFunction read_candidate(std::istream& in, const Interval& interval) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("candidate: empty file");
  const auto header = split(detail::trim(line));
  if (header.size() < 2 || header[0] != "x" || header[1] != "y" || header.size() > 3 ||
      (header.size() == 3 && header[2] != "z")) {
    throw ConfigError(fmt::format("candidate: expected header 'x,y' or 'x,y,z', got '{}'", detail::trim(line)));
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (int line_no = 2; std::getline(in, line); ++line_no) {
    const std::string_view row = detail::trim(line);
    if (row.empty()) continue;
    const auto cells = split(row);
    if (cells.size() != header.size()) {
      throw ConfigError(fmt::format("candidate: line {}: expected {} columns", line_no, header.size()));
    }
    const std::string where = fmt::format("candidate: line {}", line_no);
    xs.push_back(detail::parse_real(cells[0], where));
    ys.push_back(detail::parse_real(cells[1], where));
  }
  if (xs.size() < min_grid + 1) {
    throw ConfigError(fmt::format("candidate: need at least {} rows, got {}", min_grid + 1, xs.size()));
  }
  const std::size_t n = xs.size() - 1;
  const double tol = 1e-9 * std::max(1.0, std::max(std::abs(interval.a()), std::abs(interval.b())));
  if (std::abs(xs.front() - interval.a()) > tol || std::abs(xs.back() - interval.b()) > tol) {
    throw ConfigError(fmt::format("candidate: x runs from {} to {} but the problem lives on [{}, {}]", xs.front(),
                                  xs.back(), interval.a(), interval.b()));
  }
  for (std::size_t i = 0; i <= n; ++i) {
    if (std::abs(xs[i] - GridFunction::node(interval, n, i)) > tol) {
      throw ConfigError(fmt::format("candidate: x is not a uniform grid (row {}, x = {})", i + 1, xs[i]));
    }
  }
  return GridFunction(interval, std::move(ys));
}

inline GridFunction read_candidate(const std::string& path, const Interval& interval) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read candidate '{}'", path));
  return read_candidate(in, interval);
}

}  // namespace fracvar::csv
