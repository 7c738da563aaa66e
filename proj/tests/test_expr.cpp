#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fracvar/expr.hpp"

using namespace fracvar;

namespace {

EvalEnv env_at(double x, double y, double z, double t, double u, const Parameters* p = nullptr) {
  return EvalEnv{Point{x, y, z, t, u}, p};
}

std::size_t error_offset(const std::string& src) {
  try {
    parse_expr(src);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no parse error for '" << src << "'";
  return std::string::npos;
}

}  // namespace

TEST(ParseExpr, ExampleSevenIntegrand) {
  const Expr e = parse_expr("z^2 + g*t^2 + l*(u-1)^2");
  EXPECT_EQ(parameter_names(e), (std::set<std::string>{"g", "l"}));
}

TEST(ParseExpr, Zero) {
  const Expr e = parse_expr("0");
  ASSERT_TRUE(std::holds_alternative<Constant>(e.node().v));
  EXPECT_EQ(std::get<Constant>(e.node().v).value, 0.0);
}

TEST(ParseExpr, Precedence) {
  const Parameters none;
  const auto v = [&](const char* s) { return eval_expr(parse_expr(s), env_at(2, 0, 0, 0, 0, &none)); };
  EXPECT_DOUBLE_EQ(v("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(v("2 ^ 3 ^ 2"), 512.0);  // right-associative
  EXPECT_DOUBLE_EQ(v("-x^2"), -4.0);        // ^ binds tighter than unary minus
  EXPECT_DOUBLE_EQ(v("2^-1"), 0.5);
  EXPECT_DOUBLE_EQ(v("8 / 4 / 2"), 1.0);    // left-associative
  EXPECT_DOUBLE_EQ(v("10 - 3 - 2"), 5.0);
  EXPECT_DOUBLE_EQ(v("--x"), 2.0);
  EXPECT_DOUBLE_EQ(v(" ( 1+x ) *\t3 "), 9.0);
  EXPECT_DOUBLE_EQ(v("1.5e1 + .5"), 15.5);
}

TEST(ParseExpr, Errors) {
  EXPECT_EQ(error_offset("((x"), 3u);
  EXPECT_EQ(error_offset(""), 0u);
  EXPECT_EQ(error_offset("   "), 3u);
  EXPECT_EQ(error_offset("1 +"), 3u);
  EXPECT_EQ(error_offset("x)"), 1u);
  EXPECT_EQ(error_offset("foo(x)"), 0u);
  EXPECT_EQ(error_offset("2 * * 3"), 4u);
  EXPECT_EQ(error_offset("sqrt + 1"), 5u);
  EXPECT_EQ(error_offset("x $ y"), 2u);
}

TEST(EvalExpr, Examples) {
  const Parameters p{{"g", 1.0}, {"l", 1.0}};
  const Expr e = parse_expr("z^2 + g*t^2 + l*(u-1)^2");
  // Rounded inputs: 0.344733^2 + 0.305508^2 + 0.305508^2 = 0.118841 + 0.093335 + 0.093335.
  EXPECT_NEAR(eval_expr(e, env_at(0.3, 0.0, 0.344733, 0.305508, 0.694492, &p)), 0.305511, 1e-6);
  // At the exact stationary point the value collapses to c0 = alpha!^2 / (1 + 2 alpha!^2).
  const double af2 = std::pow(std::tgamma(1.5), 2);
  const double c1 = 1.0 / (1.0 + 2.0 * af2), c0 = af2 * c1;
  EXPECT_NEAR(eval_expr(e, env_at(0.3, 0.0, c1 * std::tgamma(1.5), c0, c0 + c1, &p)), 0.3055077, 1e-6);
  EXPECT_EQ(eval_expr(parse_expr("x"), env_at(7, 0, 0, 0, 0)), 7.0);
  EXPECT_NEAR(eval_expr(parse_expr("gamma(1.5)"), env_at(0, 0, 0, 0, 0)), 0.8862269255, 1e-10);
  EXPECT_NEAR(eval_expr(parse_expr("ln(exp(2)) + sqrt(16) + abs(-3)"), env_at(0, 0, 0, 0, 0)), 9.0, 1e-14);
}

TEST(EvalExpr, Errors) {
  const EvalEnv env = env_at(-1, 0, 0, 0, 0);
  EXPECT_THROW(eval_expr(parse_expr("g * z"), env), EvalError);
  EXPECT_THROW(eval_expr(parse_expr("1/(y-y)"), env), EvalError);
  EXPECT_THROW(eval_expr(parse_expr("x^0.5"), env), EvalError);
  EXPECT_NO_THROW(eval_expr(parse_expr("x^3"), env));
  EXPECT_THROW(eval_expr(parse_expr("exp(1000)"), env), EvalError);
  EXPECT_THROW(eval_expr(parse_expr("ln(0)"), env), EvalError);
  EXPECT_THROW(eval_expr(parse_expr("sqrt(x)"), env), EvalError);
  EXPECT_THROW(eval_expr(parse_expr("gamma(x)"), env), EvalError);
}

TEST(Partial, Examples) {
  const Parameters none;
  EXPECT_NEAR(partial(parse_expr("z^2"), Slot::z, env_at(0, 0, 3, 0, 0, &none)), 6.0, 1e-4);
  EXPECT_NEAR(partial(parse_expr("z^2 + t^2 + (u-1)^2"), Slot::t, env_at(0, 0, 0, 0.305508, 0.5, &none)),
              0.611016, 1e-4);
  EXPECT_NEAR(partial(parse_expr("z^2"), Slot::y, env_at(0, 1.3, 0.2, 0, 0, &none)), 0.0, 1e-6);
}

TEST(Partial, ConstantExpression) {
  const Expr e = parse_expr("gamma(2.5) * 3 - 1/7");
  for (Slot s : varied_slots) EXPECT_NEAR(partial(e, s, env_at(0.1, 5, -2, 1e3, 0)), 0.0, 1e-10);
}

TEST(Partial, RelativeAccuracyOnSmoothExpressions) {
  const Expr e = parse_expr("exp(0.3*y) * z^3 - sqrt(1 + t^2) * u + y*u");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const double y = d(rng), z = d(rng), t = d(rng), u = d(rng);
    const EvalEnv env = env_at(0, y, z, t, u);
    const double exact_z = 3.0 * std::exp(0.3 * y) * z * z;
    const double exact_u = -std::sqrt(1 + t * t) + y;
    EXPECT_NEAR(partial(e, Slot::z, env), exact_z, 1e-5 * std::max(1.0, std::abs(exact_z)));
    EXPECT_NEAR(partial(e, Slot::u, env), exact_u, 1e-5 * std::max(1.0, std::abs(exact_u)));
  }
}

// Random trees: printing and re-parsing reproduces the same structure.
TEST(ParseExpr, PrintParseRoundTrip) {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> leaves{"x", "y", "z", "t", "u", "g", "lam", "0", "2.5", "1e-07", "0.1"};
  const std::vector<std::string> fns{"gamma", "abs", "exp", "ln", "sqrt"};
  const std::vector<std::string> ops{"+", "-", "*", "/", "^"};
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    if (depth == 0 || pick(4) == 0) return leaves[pick(leaves.size())];
    switch (pick(4)) {
      case 0: return "-" + gen(depth - 1);
      case 1: return fns[pick(fns.size())] + "(" + gen(depth - 1) + ")";
      default: return "(" + gen(depth - 1) + ")" + ops[pick(ops.size())] + gen(depth - 1);
    }
  };
  for (int k = 0; k < 300; ++k) {
    const std::string src = gen(5);
    const Expr e = parse_expr(src);
    const std::string printed = to_string(e);
    EXPECT_EQ(parse_expr(printed), e) << src << "  ->  " << printed;
    EXPECT_EQ(to_string(parse_expr(printed)), printed);
  }
  EXPECT_FALSE(parse_expr("x + y") == parse_expr("y + x"));
}
