#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "fracvar/solver.hpp"

namespace fracvar::report {

// Every line is "<key padded to 16>value"; keys never contain spaces.
inline void field(std::ostream& out, std::string_view key, std::string_view value) {
  out << fmt::format("{:<16}{}\n", key, value);
}

inline std::string number(double v) { return fmt::format("{:.10g}", v); }

inline std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : "n.a."; }

inline std::string describe(const ConvexityOutcome& c) {
  switch (c.status) {
    case ConvexityOutcome::Status::certified_on_samples:
      return fmt::format("certified on {} samples (seed {})", c.options.samples, c.options.seed);
    case ConvexityOutcome::Status::counterexample:
      return fmt::format("counterexample at sample {} (increase {:.6g} < linear bound {:.6g})",
                         c.witness->sample_index, c.witness->increase, c.witness->linear_bound);
    case ConvexityOutcome::Status::not_checked:
      break;
  }
  return "not checked";
}

inline void problem(std::ostream& out, const VariationalProblem& p) {
  field(out, "lagrangian", p.lagrangian.describe());
  field(out, "alpha", number(p.order.value()));
  field(out, "interval", fmt::format("[{}, {}]", number(p.interval.a()), number(p.interval.b())));
  field(out, "y_a", p.at_a.describe());
  field(out, "y_b", p.at_b.describe());
}

inline void optimality(std::ostream& out, const OptimalityReport& r) {
  field(out, "el_residual", number(r.el_residual_max));
  field(out, "bc_a_residual", optional_number(r.bc_a_residual));
  field(out, "bc_b_residual", optional_number(r.bc_b_residual));
  field(out, "tolerance", number(r.tolerance));
  field(out, "convexity", describe(r.convexity));
  field(out, "classification", to_string(r.classification));
}

inline void solve(std::ostream& out, const SolveReport& r) {
  for (std::size_t k = 0; k < r.coefficients.size(); ++k) {
    field(out, fmt::format("c{}", k), fmt::format("{:.17g}", r.coefficients[k]));
  }
  field(out, "objective", fmt::format("{:.17g}", r.objective));
  field(out, "iterations", std::to_string(r.iterations));
  field(out, "converged", r.converged ? "yes" : "no");
  field(out, "final_step", number(r.final_step));
  if (!r.diagnostics.empty()) field(out, "diagnostics", r.diagnostics);
  optimality(out, r.optimality);
}

}  // namespace fracvar::report
