#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "fracvar/errors.hpp"
#include "fracvar/expr.hpp"
#include "fracvar/fracops.hpp"
#include "fracvar/problem.hpp"

namespace fracvar {

/// y(x) = sum_k c_k (x - a)^{k alpha}.
struct BasisCandidate {
  std::vector<double> coefficients;
};

/// A candidate is either basis coefficients (exact y^(alpha)) or grid samples (numerical y^(alpha)).
using Candidate = std::variant<BasisCandidate, GridFunction>;

inline bool is_basis(const Candidate& c) noexcept { return std::holds_alternative<BasisCandidate>(c); }

/// y, y^(alpha) and the end-point values of a candidate, on a grid over the problem interval.
struct Trajectory {
  GridFunction y;
  GridFunction z;
  double y_a;
  double y_b;
  bool exact_derivative;

  Point at(std::size_t i) const { return Point{y.node(i), y[i], z[i], y_a, y_b}; }
};

namespace detail {

inline Trajectory basis_trajectory(const VariationalProblem& problem, const BasisCandidate& basis, std::size_t n) {
  const auto& c = basis.coefficients;
  if (c.empty()) throw DomainError("basis candidate needs at least one coefficient");
  for (double v : c) {
    if (!std::isfinite(v)) throw DomainError("basis coefficient is not finite");
  }
  if (n < min_grid) throw GridError("grid too coarse: need at least " + std::to_string(min_grid) + " subintervals");

  const double alpha = problem.order.value();
  std::vector<MonomialSymbol> symbols;
  for (std::size_t k = 1; k < c.size(); ++k) {
    symbols.push_back(monomial_derivative(static_cast<double>(k) * alpha, problem.order));
  }

  const Interval& iv = problem.interval;
  std::vector<double> y(n + 1);
  std::vector<double> z(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = GridFunction::node(iv, n, i) - iv.a();
    double yi = c[0];
    double zi = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
      yi += c[k] * std::pow(s, static_cast<double>(k) * alpha);
      zi += c[k] * symbols[k - 1].coefficient * std::pow(s, symbols[k - 1].exponent);
    }
    y[i] = yi;
    z[i] = zi;
  }
  const double y_a = y.front();
  const double y_b = y.back();
  return Trajectory{GridFunction(iv, std::move(y)), GridFunction(iv, std::move(z)), y_a, y_b, true};
}

inline Trajectory grid_trajectory(const VariationalProblem& problem, const GridFunction& y) {
  if (!(y.interval() == problem.interval)) {
    throw ShapeError(fmt::format("candidate grid covers [{}, {}] but the problem lives on [{}, {}]",
                                 y.interval().a(), y.interval().b(), problem.interval.a(), problem.interval.b()));
  }
  GridFunction z = jumarie_derivative(y, problem.order);
  return Trajectory{y, std::move(z), y.front(), y.back(), false};
}

/// Nodewise f(point_i), with evaluation failures re-thrown naming the node position.
template <class F>
GridFunction along(const Trajectory& tr, F&& f) {
  std::vector<double> out(tr.y.intervals() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Point p = tr.at(i);
    try {
      out[i] = f(p);
    } catch (const EvalError& e) {
      throw EvalError(fmt::format("{} (at x = {:.17g})", e.what(), p.x));
    }
  }
  return GridFunction(tr.y.interval(), std::move(out));
}

}  // namespace detail

/// Samples a candidate on an n-subinterval grid (grid candidates keep their own grid).
inline Trajectory trajectory(const VariationalProblem& problem, const Candidate& y, std::size_t n = default_grid) {
  if (const auto* basis = std::get_if<BasisCandidate>(&y)) return detail::basis_trajectory(problem, *basis, n);
  return detail::grid_trajectory(problem, std::get<GridFunction>(y));
}

/// J(y) = int_a^b L(x, y, y^(alpha), y(a), y(b)) (dx)^alpha.
inline double evaluate(const VariationalProblem& problem, const Candidate& y, std::size_t n = default_grid) {
  const Trajectory tr = trajectory(problem, y, n);
  const GridFunction integrand = detail::along(tr, [&](const Point& p) { return problem.lagrangian(p); });
  return fractional_integral(integrand, problem.order);
}

/// r(x) = d2L - (d^alpha/dx^alpha) d3L on the grid.
inline GridFunction el_residual(const VariationalProblem& problem, const Candidate& y, std::size_t n = default_grid) {
  const Trajectory tr = trajectory(problem, y, n);
  const GridFunction d2 = detail::along(tr, [&](const Point& p) { return problem.lagrangian.partial(Slot::y, p); });
  const GridFunction d3 = detail::along(tr, [&](const Point& p) { return problem.lagrangian.partial(Slot::z, p); });
  const GridFunction outer = jumarie_derivative(d3, problem.order);
  return d2.zip(outer, [](double p, double q) { return p - q; });
}

/// Nodes excluded at each end when taking the interior max-norm of the EL residual.
inline constexpr std::size_t el_boundary_skip = 3;

inline double interior_max_abs(const GridFunction& r) {
  double m = 0.0;
  for (std::size_t i = el_boundary_skip; i + el_boundary_skip <= r.intervals(); ++i) m = std::max(m, std::abs(r[i]));
  return m;
}

/// Natural boundary condition residuals; empty where the end-point is fixed.
struct BoundaryResiduals {
  std::optional<double> at_a;
  std::optional<double> at_b;
};

/// at_a = int d4L (dx)^alpha - alpha! d3L|_a,   at_b = int d5L (dx)^alpha + alpha! d3L|_b.
/// Basis candidates evaluate d3L at the end-points directly; grid candidates extrapolate it from
/// the three nearest interior nodes.
inline BoundaryResiduals natural_bc_residuals(const VariationalProblem& problem, const Candidate& y,
                                              std::size_t n = default_grid) {
  BoundaryResiduals out;
  if (!problem.at_a.is_free() && !problem.at_b.is_free()) return out;

  const Trajectory tr = trajectory(problem, y, n);
  const GridFunction d3 = detail::along(tr, [&](const Point& p) { return problem.lagrangian.partial(Slot::z, p); });
  const double af = alpha_factorial(problem.order);

  if (problem.at_a.is_free()) {
    const GridFunction d4 = detail::along(tr, [&](const Point& p) { return problem.lagrangian.partial(Slot::t, p); });
    const double d3_a = tr.exact_derivative ? d3.front() : boundary_value_at_a(d3);
    out.at_a = fractional_integral(d4, problem.order) - af * d3_a;
  }
  if (problem.at_b.is_free()) {
    const GridFunction d5 = detail::along(tr, [&](const Point& p) { return problem.lagrangian.partial(Slot::u, p); });
    const double d3_b = tr.exact_derivative ? d3.back() : boundary_value_at_b(d3);
    out.at_b = fractional_integral(d5, problem.order) + af * d3_b;
  }
  return out;
}

struct Bounds {
  double lo;
  double hi;
};

struct ConvexityOptions {
  std::size_t samples = 10000;
  std::array<Bounds, 4> box{{{-2.0, 2.0}, {-2.0, 2.0}, {-2.0, 2.0}, {-2.0, 2.0}}};  // y, z, t, u
  std::uint64_t seed = 0;
};

/// A pair (P, P + Q) violating L(P+Q) - L(P) >= grad L(P) . Q - slack.
struct Counterexample {
  std::size_t sample_index;
  Point base;
  std::array<double, 4> step;  // Q in (y, z, t, u)
  double increase;             // L(P+Q) - L(P)
  double linear_bound;         // grad L(P) . Q
};

struct ConvexityOutcome {
  enum class Status { certified_on_samples, counterexample, not_checked };

  Status status = Status::not_checked;
  ConvexityOptions options;
  double slack = 0.0;
  std::optional<Counterexample> witness;

  bool certified() const noexcept { return status == Status::certified_on_samples; }
};

/// Slack absorbing finite-difference noise in the partials of expression Lagrangians.
inline constexpr double expression_convexity_slack = 1e-7;

/// Samples the first-order joint convexity inequality in (y, z, t, u) with x uniform in [a, b].
/// Draws are a deterministic function of the seed; the first violation in draw order is reported.
inline ConvexityOutcome convexity_certificate(const VariationalProblem& problem, const ConvexityOptions& options) {
  if (options.samples < 1) throw DomainError("convexity check needs at least one sample");
  for (const auto& b : options.box) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) throw DomainError("convexity box must be finite");
  }

  ConvexityOutcome out;
  out.options = options;
  out.slack = problem.lagrangian.analytic_partials() ? 0.0 : expression_convexity_slack;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const Interval& iv = problem.interval;

  for (std::size_t k = 0; k < options.samples; ++k) {
    const double x = draw(iv.a(), iv.b());
    Point base{x, 0, 0, 0, 0};
    Point moved{x, 0, 0, 0, 0};
    for (std::size_t s = 0; s < 4; ++s) base[varied_slots[s]] = draw(options.box[s].lo, options.box[s].hi);
    for (std::size_t s = 0; s < 4; ++s) moved[varied_slots[s]] = draw(options.box[s].lo, options.box[s].hi);

    const double increase = problem.lagrangian(moved) - problem.lagrangian(base);
    double linear = 0.0;
    std::array<double, 4> step{};
    for (std::size_t s = 0; s < 4; ++s) {
      step[s] = moved[varied_slots[s]] - base[varied_slots[s]];
      linear += problem.lagrangian.partial(varied_slots[s], base) * step[s];
    }
    if (increase < linear - out.slack) {
      out.status = ConvexityOutcome::Status::counterexample;
      out.witness = Counterexample{k, base, step, increase, linear};
      return out;
    }
  }
  out.status = ConvexityOutcome::Status::certified_on_samples;
  return out;
}

enum class Classification { non_stationary, stationary, stationary_certified };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::non_stationary: return "non-stationary";
    case Classification::stationary: return "stationary";
    case Classification::stationary_certified: return "stationary+certified";
  }
  return "?";
}

/// Residual tolerances: grid candidates carry discretization error, basis candidates do not.
inline constexpr double grid_tolerance = 1e-3;
inline constexpr double basis_tolerance = 1e-6;

struct VerifyOptions {
  std::size_t grid = default_grid;
  std::optional<double> tolerance;  // defaults by candidate kind
  bool check_convexity = true;
  ConvexityOptions convexity;
};

struct OptimalityReport {
  double el_residual_max = 0.0;
  std::optional<double> bc_a_residual;
  std::optional<double> bc_b_residual;
  ConvexityOutcome convexity;
  Classification classification = Classification::non_stationary;
  double tolerance = 0.0;
};

inline OptimalityReport verify(const VariationalProblem& problem, const Candidate& y, const VerifyOptions& options = {}) {
  OptimalityReport report;
  report.tolerance = options.tolerance.value_or(is_basis(y) ? basis_tolerance : grid_tolerance);
  if (!(report.tolerance > 0.0)) throw DomainError("residual tolerance must be positive");

  report.el_residual_max = interior_max_abs(el_residual(problem, y, options.grid));
  const BoundaryResiduals bc = natural_bc_residuals(problem, y, options.grid);
  report.bc_a_residual = bc.at_a;
  report.bc_b_residual = bc.at_b;
  if (options.check_convexity) report.convexity = convexity_certificate(problem, options.convexity);

  const auto exceeds = [&](const std::optional<double>& r) { return r && !(std::abs(*r) <= report.tolerance); };
  if (!(report.el_residual_max <= report.tolerance) || exceeds(report.bc_a_residual) || exceeds(report.bc_b_residual)) {
    report.classification = Classification::non_stationary;
  } else if (report.convexity.certified()) {
    report.classification = Classification::stationary_certified;
  } else {
    report.classification = Classification::stationary;
  }
  return report;
}

}  // namespace fracvar
