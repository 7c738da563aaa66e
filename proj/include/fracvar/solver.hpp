#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "fracvar/errors.hpp"
#include "fracvar/functional.hpp"

namespace fracvar {

struct SolveOptions {
  std::size_t basis_degree = 1;  // K: y = sum_{k=0}^{K} c_k (x-a)^{k alpha}
  std::size_t grid = default_grid;
  double step_tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  std::vector<double> initial_coefficients;  // K+1 values; empty means all zero
  bool record_trajectory = false;
  VerifyOptions verify;  // verify.grid is replaced by `grid`
};

struct SolveReport {
  std::vector<double> coefficients;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double final_step = 0.0;  // coefficient-space norm of the last step tried
  std::string diagnostics;
  std::vector<double> objective_history;               // one entry per accepted iterate, starting point first
  std::vector<std::vector<double>> trajectory;         // full coefficient vectors, if recorded
  OptimalityReport optimality;
};

inline constexpr double gradient_step = 1e-6;
inline constexpr double armijo_constant = 1e-4;
inline constexpr int max_halvings = 20;

namespace detail {

/// Maps the free coefficients to the full vector c_0..c_K, eliminating c_0 when y(a) is fixed and
/// c_K when y(b) is fixed.
class Elimination {
 public:
  Elimination(const VariationalProblem& problem, std::size_t degree) : problem_(problem), degree_(degree) {
    const double length = problem.interval.length();
    for (std::size_t k = 0; k <= degree; ++k) {
      right_powers_.push_back(k == 0 ? 1.0 : std::pow(length, static_cast<double>(k) * problem.order.value()));
    }
    for (std::size_t k = 0; k <= degree; ++k) {
      const bool fixed_a = k == 0 && !problem.at_a.is_free();
      const bool fixed_b = k == degree && !problem.at_b.is_free();
      if (!fixed_a && !fixed_b) free_.push_back(k);
    }
  }

  std::size_t dimension() const noexcept { return free_.size(); }

  std::vector<double> restrict(const std::vector<double>& full) const {
    std::vector<double> out;
    for (std::size_t k : free_) out.push_back(full[k]);
    return out;
  }

  std::vector<double> expand(const std::vector<double>& reduced) const {
    std::vector<double> c(degree_ + 1, 0.0);
    for (std::size_t i = 0; i < free_.size(); ++i) c[free_[i]] = reduced[i];
    if (!problem_.at_a.is_free()) c[0] = problem_.at_a.value();
    if (!problem_.at_b.is_free()) {
      double partial = c[0];
      for (std::size_t k = 1; k < degree_; ++k) partial += c[k] * right_powers_[k];
      c[degree_] = (problem_.at_b.value() - partial) / right_powers_[degree_];
    }
    return c;
  }

 private:
  const VariationalProblem& problem_;
  std::size_t degree_;
  std::vector<double> right_powers_;
  std::vector<std::size_t> free_;
};

inline double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

/// Direct method: steepest descent on J over the fractional-power basis, with end-point conditions
/// enforced by eliminating coefficients and a backtracking (halving, Armijo) line search.
inline SolveReport solve(const VariationalProblem& problem, const SolveOptions& options = {}) {
  if (options.basis_degree < 1) throw DomainError("basis degree must be at least 1");
  if (options.grid < 100) throw DomainError("solver grid must have at least 100 subintervals");
  if (!(options.step_tolerance > 0.0)) throw DomainError("step tolerance must be positive");
  if (options.max_iterations < 1) throw DomainError("max_iterations must be at least 1");

  const std::size_t degree = options.basis_degree;
  std::vector<double> start = options.initial_coefficients;
  if (start.empty()) start.assign(degree + 1, 0.0);
  if (start.size() != degree + 1) {
    throw DomainError(fmt::format("expected {} initial coefficients, got {}", degree + 1, start.size()));
  }
  for (double v : start) {
    if (!std::isfinite(v)) throw DomainError("initial coefficient is not finite");
  }

  const detail::Elimination elim(problem, degree);
  const auto objective = [&](const std::vector<double>& reduced) {
    return evaluate(problem, BasisCandidate{elim.expand(reduced)}, options.grid);
  };
  const auto trial = [&](const std::vector<double>& reduced) -> std::optional<double> {
    try {
      const double v = objective(reduced);
      if (std::isfinite(v)) return v;
    } catch (const EvalError&) {
    }
    return std::nullopt;
  };

  SolveReport report;
  std::vector<double> x = elim.restrict(start);
  double fx = objective(x);
  if (!std::isfinite(fx)) throw NumericError("objective is not finite at the initial point");

  report.objective_history.push_back(fx);
  if (options.record_trajectory) report.trajectory.push_back(elim.expand(x));

  const std::size_t dim = elim.dimension();
  if (dim == 0) {
    report.converged = true;
    report.diagnostics = "all coefficients fixed by end-point conditions";
  }

  std::vector<double> grad(dim);
  while (!report.converged && report.iterations < options.max_iterations) {
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<double> probe = x;
      probe[i] = x[i] + gradient_step;
      const double up = objective(probe);
      probe[i] = x[i] - gradient_step;
      const double down = objective(probe);
      grad[i] = (up - down) / (2.0 * gradient_step);
    }
    const double gnorm = detail::norm(grad);
    if (!std::isfinite(gnorm)) throw NumericError("gradient is not finite");

    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= max_halvings; ++halving, t *= 0.5) {
      report.final_step = t * gnorm;
      if (report.final_step < options.step_tolerance) {
        // The next move would be below tolerance whether or not it decreases J.
        report.converged = true;
        break;
      }
      std::vector<double> next(dim);
      for (std::size_t i = 0; i < dim; ++i) next[i] = x[i] - t * grad[i];
      const auto fn = trial(next);
      if (fn && *fn < fx && *fn <= fx - armijo_constant * t * gnorm * gnorm) {
        x = std::move(next);
        fx = *fn;
        accepted = true;
        break;
      }
    }
    if (report.converged) break;
    if (!accepted) {
      report.diagnostics = fmt::format("line search failed after {} halvings (gradient norm {:.3e})", max_halvings,
                                       gnorm);
      break;
    }
    ++report.iterations;
    report.objective_history.push_back(fx);
    if (options.record_trajectory) report.trajectory.push_back(elim.expand(x));
    if (report.final_step < options.step_tolerance) report.converged = true;
  }
  if (!report.converged && report.diagnostics.empty()) {
    report.diagnostics = fmt::format("reached max_iterations = {}", options.max_iterations);
  }

  report.coefficients = elim.expand(x);
  report.objective = fx;
  VerifyOptions vopts = options.verify;
  vopts.grid = options.grid;
  report.optimality = verify(problem, BasisCandidate{report.coefficients}, vopts);
  return report;
}

}  // namespace fracvar
