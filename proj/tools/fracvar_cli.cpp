#include <CLI11.hpp>

#include "fracvar/cli.hpp"

namespace {

constexpr const char* formats = R"(Exit codes:
  0 success      1 bad config, flags or candidate file      2 numeric failure
  3 solver did not converge      4 verify found the candidate non-stationary

Config (key = value per line, '#' comments):
  alpha = 0.5                 order, 0 < alpha <= 1
  a = 0                       interval [a, b], a < b
  b = 1
  lagrangian = builtin:ex7    builtin:ex6 | builtin:ex7 | builtin:classical_ex7 (alpha = 1)
                              or an expression in x, y, z, t, u, e.g. "z^2 + g*t^2"
                              (z = y^(alpha), t = y(a), u = y(b); ^ is right-associative
                              and binds tighter than unary minus; functions gamma, abs,
                              exp, ln, sqrt; any other name is a parameter)
  param.g = 1                 binds a parameter (builtin ex7 needs g and l)
  y_a = free                  free or a number fixing y(a); likewise y_b

Reports: one "key value" line per field, key padded to 16 columns.
CSV: '.' decimal, 17 significant digits, header row mandatory.
  solve --out        x,y,z          (z = y^(alpha)), grid + 1 rows
  verify --candidate x,y[,z]        uniform grid over [a, b]; z is ignored
  sweep              alpha,c0,...,cK,objective,converged)";

}  // namespace

int main(int argc, char** argv) {
  using namespace fracvar::cli;
  CLI::App app{"Fractional variational problems: solve, verify, diagnose, sweep"};
  app.footer(formats);
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Minimize J over the fractional-power basis");
  solve->add_option("config", solve_args.config, "problem config")->required();
  solve->add_option("--basis", solve_args.basis, "basis degree K (coefficients c0..cK)")->capture_default_str();
  solve->add_option("--grid", solve_args.grid, "grid subintervals")->capture_default_str();
  solve->add_option("--tol", solve_args.tol, "step tolerance")->capture_default_str();
  solve->add_option("--max-iter", solve_args.max_iterations, "iteration cap")->capture_default_str();
  solve->add_option("--init", solve_args.init, "initial coefficients c0,c1,...")->delimiter(',');
  solve->add_option("--out", solve_args.out, "write x,y,z CSV of the solution");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check the Euler-Lagrange equation and natural boundary conditions");
  verify->add_option("config", verify_args.config, "problem config")->required();
  auto* candidate = verify->add_option("--candidate", verify_args.candidate, "x,y CSV candidate");
  auto* coeffs = verify->add_option("--coeffs", verify_args.coeffs, "basis coefficients c0,c1,...")->delimiter(',');
  candidate->excludes(coeffs);
  verify->add_option("--grid", verify_args.grid, "grid subintervals for basis candidates")->capture_default_str();
  verify->add_option("--tol", verify_args.tol, "residual tolerance (default 1e-6 basis, 1e-3 grid)");
  verify->add_option("--samples", verify_args.samples, "convexity samples")->capture_default_str();
  verify->add_option("--seed", verify_args.seed, "convexity sampling seed")->capture_default_str();
  bool no_convexity = false;
  verify->add_flag("--no-convexity", no_convexity, "skip the convexity check");

  DiagnoseArgs diagnose_args;
  auto* diagnose = app.add_subcommand("diagnose", "Measure operator properties on [0, 1]");
  diagnose->add_option("--alpha", diagnose_args.alpha, "order")->capture_default_str();
  diagnose->add_option("--grid", diagnose_args.grid, "grid subintervals")->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Solve on an inclusive linear grid of orders");
  sweep->add_option("config", sweep_args.config, "problem config")->required();
  sweep->add_option("--alpha-from", sweep_args.from, "first order")->required();
  sweep->add_option("--alpha-to", sweep_args.to, "last order")->required();
  sweep->add_option("--steps", sweep_args.steps, "number of orders")->required();
  sweep->add_option("--basis", sweep_args.basis, "basis degree K")->capture_default_str();
  sweep->add_option("--grid", sweep_args.grid, "grid subintervals")->capture_default_str();
  sweep->add_option("--tol", sweep_args.tol, "step tolerance")->capture_default_str();
  sweep->add_option("--max-iter", sweep_args.max_iterations, "iteration cap")->capture_default_str();
  sweep->add_option("--out", sweep_args.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : bad_input;
  }

  if (*solve) return cmd_solve(solve_args);
  if (*verify) {
    verify_args.convexity = !no_convexity;
    return cmd_verify(verify_args);
  }
  if (*diagnose) return cmd_diagnose(diagnose_args);
  return cmd_sweep(sweep_args);
}
