#pragma once

#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fracvar/config.hpp"
#include "fracvar/csv.hpp"
#include "fracvar/report.hpp"
#include "fracvar/solver.hpp"

namespace fracvar::cli {

enum ExitCode : int {
  ok = 0,
  bad_input = 1,
  numeric_failure = 2,
  not_converged = 3,
  non_stationary = 4,
};

struct SolveArgs {
  std::string config;
  std::size_t basis = 1;
  std::size_t grid = default_grid;
  double tol = 1e-10;
  std::size_t max_iterations = 100000;
  std::vector<double> init;
  std::optional<std::string> out;
};

struct VerifyArgs {
  std::string config;
  std::optional<std::string> candidate;
  std::vector<double> coeffs;
  std::size_t grid = default_grid;
  std::optional<double> tol;
  bool convexity = true;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
};

struct DiagnoseArgs {
  double alpha = 0.5;
  std::size_t grid = default_grid;
};

struct SweepArgs {
  std::string config;
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 0;
  std::size_t basis = 1;
  std::size_t grid = default_grid;
  double tol = 1e-10;
  std::size_t max_iterations = 100000;
  std::optional<std::string> out;
};

/// Maps library exceptions to exit codes; everything the user can fix by editing input is 1.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const EvalError& e) {
    err << "error: " << e.what() << '\n';
    return numeric_failure;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return numeric_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return bad_input;
  }
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path));
  return out;
}

inline SolveOptions solve_options(std::size_t basis, std::size_t grid, double tol, std::size_t max_iterations,
                                  std::vector<double> init) {
  SolveOptions o;
  o.basis_degree = basis;
  o.grid = grid;
  o.step_tolerance = tol;
  o.max_iterations = max_iterations;
  o.initial_coefficients = std::move(init);
  return o;
}

}  // namespace detail

inline int cmd_solve(const SolveArgs& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const VariationalProblem p = load_config(args.config).problem();
    const SolveReport r =
        solve(p, detail::solve_options(args.basis, args.grid, args.tol, args.max_iterations, args.init));
    report::problem(out, p);
    report::solve(out, r);
    if (args.out) {
      auto file = detail::open_output(*args.out);
      csv::write_trajectory(file, trajectory(p, BasisCandidate{r.coefficients}, args.grid));
    }
    return r.converged ? ok : not_converged;
  });
}

inline int cmd_verify(const VerifyArgs& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    if (args.candidate.has_value() == !args.coeffs.empty()) {
      throw ConfigError("give exactly one of --candidate and --coeffs");
    }
    const VariationalProblem p = load_config(args.config).problem();
    VerifyOptions o;
    o.grid = args.grid;
    o.tolerance = args.tol;
    o.check_convexity = args.convexity;
    o.convexity.samples = args.samples;
    o.convexity.seed = args.seed;
    const Candidate y = args.candidate ? Candidate(csv::read_candidate(*args.candidate, p.interval))
                                       : Candidate(BasisCandidate{args.coeffs});
    const OptimalityReport r = verify(p, y, o);
    report::problem(out, p);
    report::field(out, "candidate", args.candidate ? fmt::format("grid from {}", *args.candidate)
                                                   : fmt::format("basis {}", fmt::join(args.coeffs, ",")));
    report::optimality(out, r);
    return r.classification == Classification::non_stationary ? non_stationary : ok;
  });
}

/// Operator property measurements; reports numbers, never judges them.
inline int cmd_diagnose(const DiagnoseArgs& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const FractionalOrder order(args.alpha);
    const double alpha = order.value();
    const Interval unit(0.0, 1.0);
    const std::size_t n = args.grid;
    const auto power = [&](double g) { return GridFunction::sample(unit, n, [g](double t) { return std::pow(t, g); }); };
    const auto row = [&](std::string_view name, double v) { out << fmt::format("{:<34}{:>+.6e}\n", name, v); };

    out << fmt::format("{:<34}{}\n", "alpha", report::number(alpha));
    out << fmt::format("{:<34}{}\n", "grid", n);

    const GridFunction constant = GridFunction::sample(unit, n, [](double) { return 3.7; });
    double constant_error = 0.0;
    for (double v : jumarie_derivative(constant, order).values()) constant_error = std::max(constant_error, std::abs(v));
    row("constant_rule_max_error", constant_error);

    for (const double g : {0.5, 1.0, 2.0}) {
      const GridFunction d = jumarie_derivative(power(g), order);
      const MonomialSymbol sym = monomial_derivative(g, order);
      double worst = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        const double x = d.node(i);
        if (x < 0.1) continue;
        const double exact = sym.coefficient * std::pow(x, sym.exponent);
        worst = std::max(worst, std::abs(d[i] - exact) / std::abs(exact));
      }
      row(fmt::format("monomial_rule_rel_error(g={})", g), worst);
    }

    row("normalization_error", fractional_integral(GridFunction::sample(unit, n, [](double) { return 1.0; }), order) -
                                   1.0);
    for (const double g : {0.5, 1.0, 2.0}) {
      row(fmt::format("fundamental_identity(g={})", g), fundamental_identity_residual(power(g), order));
    }
    row("ibp_defect(t^a,t^a)", ibp_defect(power(alpha), power(alpha), order));
    row("product_rule_defect(t,t)@1", product_rule_defect(power(1.0), power(1.0), order).back());
    return ok;
  });
}

inline std::vector<double> sweep_orders(double from, double to, std::size_t steps) {
  if (steps < 1) throw ConfigError("--steps must be at least 1");
  if (!(from > 0.0) || !(from <= to) || !(to <= 1.0)) {
    throw ConfigError(fmt::format("alpha range must satisfy 0 < from <= to <= 1, got {} .. {}", from, to));
  }
  if (steps == 1) {
    if (from != to) throw ConfigError("--steps 1 needs --alpha-from equal to --alpha-to");
    return {from};
  }
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = i + 1 == steps ? to : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return out;
}

inline int cmd_sweep(const SweepArgs& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const std::vector<double> orders = sweep_orders(args.from, args.to, args.steps);
    const ProblemConfig cfg = load_config(args.config);
    const SolveOptions opts = detail::solve_options(args.basis, args.grid, args.tol, args.max_iterations, {});
    std::vector<VariationalProblem> problems;
    for (const double a : orders) problems.push_back(cfg.problem(a));

    std::vector<std::future<SolveReport>> pending;
    for (const auto& p : problems) pending.push_back(std::async(std::launch::async, [&p, &opts] { return solve(p, opts); }));
    std::vector<SolveReport> results;
    for (auto& f : pending) results.push_back(f.get());

    std::ofstream file;
    if (args.out) file = detail::open_output(*args.out);
    std::ostream& sink = args.out ? static_cast<std::ostream&>(file) : out;
    sink << "alpha";
    for (std::size_t k = 0; k <= args.basis; ++k) sink << ",c" << k;
    sink << ",objective,converged\n";
    bool all = true;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const SolveReport& r = results[i];
      sink << csv::number(problems[i].order.value());
      for (double c : r.coefficients) sink << ',' << csv::number(c);
      sink << ',' << csv::number(r.objective) << ',' << (r.converged ? 1 : 0) << '\n';
      all = all && r.converged;
    }
    return all ? ok : not_converged;
  });
}

}  // namespace fracvar::cli
