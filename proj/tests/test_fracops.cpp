#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fracvar/fracops.hpp"
#include "oracles.hpp"

using fracvar::FractionalOrder;
using fracvar::GridFunction;
using fracvar::Interval;

namespace {

const Interval unit{0.0, 1.0};

GridFunction power(double g, std::size_t n, Interval iv = unit) {
  return GridFunction::sample(iv, n, [&](double t) { return std::pow(t - iv.a(), g); });
}

double max_abs(const GridFunction& f, std::size_t skip = 0) {
  double m = 0.0;
  for (std::size_t i = skip; i + skip <= f.intervals(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

}  // namespace

TEST(GridFunction, Invariants) {
  EXPECT_THROW(GridFunction(unit, {0.0, 1.0, 2.0, 3.0}), fracvar::GridError);
  EXPECT_THROW(GridFunction(unit, {0.0, 1.0, std::nan(""), 3.0, 4.0}), fracvar::DomainError);
  EXPECT_THROW(Interval(1.0, 1.0), fracvar::DomainError);
  EXPECT_THROW(Interval(0.0, std::numeric_limits<double>::infinity()), fracvar::DomainError);
  const auto f = power(1.0, 8);
  EXPECT_EQ(f.intervals(), 8u);
  EXPECT_DOUBLE_EQ(f.step(), 0.125);
  EXPECT_DOUBLE_EQ(f.node(8), 1.0);
}

TEST(MonomialDerivative, Symbols) {
  const auto s1 = fracvar::monomial_derivative(0.5, FractionalOrder(0.5));
  EXPECT_NEAR(s1.coefficient, 0.8862269255, 1e-10);
  EXPECT_DOUBLE_EQ(s1.exponent, 0.0);
  const auto s2 = fracvar::monomial_derivative(1.0, FractionalOrder(1.0));
  EXPECT_DOUBLE_EQ(s2.coefficient, 1.0);
  EXPECT_DOUBLE_EQ(s2.exponent, 0.0);
  const auto s3 = fracvar::monomial_derivative(1.0, FractionalOrder(0.5));
  EXPECT_NEAR(s3.coefficient, 1.1283791671, 1e-10);
  EXPECT_DOUBLE_EQ(s3.exponent, 0.5);
  EXPECT_THROW(fracvar::monomial_derivative(0.0, FractionalOrder(0.5)), fracvar::DomainError);
  EXPECT_THROW(fracvar::monomial_derivative(-1.0, FractionalOrder(0.5)), fracvar::DomainError);
}

TEST(JumarieDerivative, ConstantAnnihilation) {
  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.95, 1.0}) {
    const auto f = GridFunction::sample(unit, 500, [](double) { return 5.0; });
    EXPECT_LE(max_abs(fracvar::jumarie_derivative(f, FractionalOrder(alpha))), 1e-10) << alpha;
  }
}

TEST(JumarieDerivative, LinearFunction) {
  const std::size_t n = 2000;
  const auto d = fracvar::jumarie_derivative(power(1.0, n), FractionalOrder(0.5));
  const double coeff = oracle::monomial_coefficient(1.0, 0.5);
  EXPECT_NEAR(coeff, 1.1283791671, 1e-10);
  for (std::size_t i = n / 10; i <= n; ++i) {
    const double exact = coeff * std::sqrt(d.node(i));
    EXPECT_NEAR(d[i] / exact, 1.0, 1e-4) << "node " << i;
  }
}

TEST(JumarieDerivative, SquareRootIsConstant) {
  const auto d = fracvar::jumarie_derivative(power(0.5, 2000), FractionalOrder(0.5));
  for (std::size_t i = 0; i <= d.intervals(); ++i) EXPECT_NEAR(d[i], 0.8862269255, 1e-8) << i;
}

TEST(JumarieDerivative, ShiftedDomain) {
  const Interval shifted{2.0, 3.0};
  const auto d = fracvar::jumarie_derivative(power(0.5, 2000, shifted), FractionalOrder(0.5));
  for (std::size_t i = 1; i < d.intervals(); ++i) EXPECT_NEAR(d[i], 0.8862269255, 1e-8) << i;
}

// Candidates of the form c0 + c1 (t-a)^alpha differentiate to the constant c1 alpha! everywhere,
// including the boundary nodes.
TEST(JumarieDerivative, ExactOnAlphaPowerFamily) {
  for (double alpha : {0.2, 0.3, 0.5, 0.7}) {
    const FractionalOrder order(alpha);
    const auto y = GridFunction::sample(unit, 1000, [&](double t) { return 0.3 + 0.4 * std::pow(t, alpha); });
    const auto d = fracvar::jumarie_derivative(y, order);
    const double expected = 0.4 * oracle::gamma(1.0 + alpha);
    for (std::size_t i = 0; i <= d.intervals(); ++i) EXPECT_NEAR(d[i], expected, 1e-8) << alpha << " " << i;
  }
}

TEST(JumarieDerivative, MonomialLaw) {
  const std::size_t n = 2000;
  for (double g : {0.5, 1.0, 2.0}) {
    for (double alpha : {0.3, 0.5, 0.7}) {
      const auto d = fracvar::jumarie_derivative(power(g, n), FractionalOrder(alpha));
      const double coeff = oracle::monomial_coefficient(g, alpha);
      double worst = 0.0;
      for (std::size_t i = n / 10; i <= n; ++i) {
        const double exact = coeff * std::pow(d.node(i), g - alpha);
        worst = std::max(worst, std::abs(d[i] - exact) / std::abs(exact));
      }
      EXPECT_LT(worst, 1e-2) << "gamma=" << g << " alpha=" << alpha;
      EXPECT_LT(worst, 1e-4) << "gamma=" << g << " alpha=" << alpha;
    }
  }
}

TEST(JumarieDerivative, Linearity) {
  const FractionalOrder order(0.4);
  const auto f = GridFunction::sample(unit, 400, [](double t) { return std::sin(3.0 * t) + std::sqrt(t); });
  const auto g = GridFunction::sample(unit, 400, [](double t) { return std::exp(-t) * t * t; });
  const double c1 = 1.7, c2 = -0.6;
  const auto combo = f.zip(g, [&](double p, double q) { return c1 * p + c2 * q; });
  const auto lhs = fracvar::jumarie_derivative(combo, order);
  const auto df = fracvar::jumarie_derivative(f, order);
  const auto dg = fracvar::jumarie_derivative(g, order);
  for (std::size_t i = 0; i <= lhs.intervals(); ++i) {
    EXPECT_NEAR(lhs[i], c1 * df[i] + c2 * dg[i], 1e-10) << i;
  }
}

TEST(JumarieDerivative, ClassicalLimitOnQuadratics) {
  const auto p = GridFunction::sample(Interval(-1.0, 2.0), 60, [](double t) { return 2.0 - t + 3.0 * t * t; });
  const auto d = fracvar::jumarie_derivative(p, FractionalOrder(1.0));
  for (std::size_t i = 0; i <= d.intervals(); ++i) EXPECT_NEAR(d[i], -1.0 + 6.0 * d.node(i), 1e-8);
}

TEST(JumarieDerivative, Errors) {
  EXPECT_THROW(GridFunction::sample(unit, 3, [](double t) { return t; }), fracvar::GridError);
}

TEST(FractionalIntegral, Examples) {
  const auto one = [](double) { return 1.0; };
  EXPECT_NEAR(fracvar::fractional_integral(GridFunction::sample(unit, 1000, one), FractionalOrder(0.5)), 1.0, 1e-12);
  EXPECT_NEAR(fracvar::fractional_integral(GridFunction::sample(Interval(0.0, 0.25), 1000, one), FractionalOrder(0.5)),
              0.5, 1e-12);
  const double quarter_pi = oracle::fractional_integral_of_power(0.5, 0.5);
  EXPECT_NEAR(quarter_pi, std::numbers::pi / 4.0, 1e-12);
  EXPECT_NEAR(fracvar::fractional_integral(power(0.5, 2000), FractionalOrder(0.5)), quarter_pi, 1e-5);
  EXPECT_NEAR(fracvar::fractional_integral(power(1.0, 10), FractionalOrder(1.0)), 0.5, 1e-14);
}

TEST(FractionalIntegral, Normalization) {
  for (double alpha : {0.2, 0.5, 0.8}) {
    for (double t : {0.25, 0.5, 1.0}) {
      const auto f = GridFunction::sample(Interval(0.0, t), 1000, [](double) { return 1.0; });
      const double expected = std::pow(t, alpha);
      EXPECT_NEAR(fracvar::fractional_integral(f, FractionalOrder(alpha)) / expected, 1.0, 1e-4);
    }
  }
}

TEST(FractionalIntegral, MonomialsAgainstBetaOracle) {
  for (double g : {0.5, 1.0, 2.0, 3.5}) {
    for (double alpha : {0.3, 0.5, 0.9}) {
      EXPECT_NEAR(fracvar::fractional_integral(power(g, 2000), FractionalOrder(alpha)),
                  oracle::fractional_integral_of_power(g, alpha), 1e-5)
          << g << " " << alpha;
    }
  }
}

TEST(FractionalIntegral, ClassicalIsTrapezoid) {
  const auto f = GridFunction::sample(unit, 50, [](double t) { return 1.0 + t - 2.0 * t * t; });
  double trapezoid = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i < 50; ++i) trapezoid += f[i];
  trapezoid *= f.step();
  EXPECT_NEAR(fracvar::fractional_integral(f, FractionalOrder(1.0)), trapezoid, 1e-12);
}

TEST(BoundaryExtrapolation, ExactOnQuadratics) {
  const auto f = GridFunction::sample(Interval(1.0, 2.0), 20, [](double t) { return t * t - 3.0 * t; });
  EXPECT_NEAR(fracvar::boundary_value_at_a(f), -2.0, 1e-12);
  EXPECT_NEAR(fracvar::boundary_value_at_b(f), -2.0, 1e-12);
}

TEST(IbpDefect, ConstantFactorVanishes) {
  const auto u = GridFunction::sample(unit, 2000, [](double) { return 2.5; });
  EXPECT_NEAR(fracvar::ibp_defect(u, power(0.5, 2000), FractionalOrder(0.5)), 0.0, 1e-5);
  EXPECT_NEAR(fracvar::ibp_defect(u, power(2.0, 2000), FractionalOrder(0.5)), 0.0, 1e-5);
}

TEST(IbpDefect, SquareRootPair) {
  const double af = oracle::gamma(1.5);
  const double lhs = af * af * af / oracle::gamma(2.0);
  const double expected = lhs - (af - lhs);
  // (alpha!)^3 / Gamma(2) - (alpha! - (alpha!)^3) = 0.50585507...
  EXPECT_NEAR(expected, 0.5059, 1e-4);
  const auto u = power(0.5, 2000);
  EXPECT_NEAR(fracvar::ibp_defect(u, u, FractionalOrder(0.5)), expected, 1e-3);
}

TEST(IbpDefect, ClassicalHolds) {
  EXPECT_NEAR(fracvar::ibp_defect(power(1.0, 2000), power(2.0, 2000), FractionalOrder(1.0)), 0.0, 1e-6);
}

TEST(IbpDefect, MismatchedGrids) {
  EXPECT_THROW(fracvar::ibp_defect(power(1.0, 100), power(1.0, 200), FractionalOrder(0.5)), fracvar::ShapeError);
  EXPECT_THROW(fracvar::ibp_defect(power(1.0, 100), power(1.0, 100, Interval(0.0, 2.0)), FractionalOrder(0.5)),
               fracvar::ShapeError);
}

TEST(ProductRuleDefect, ConstantFactor) {
  const auto c = GridFunction::sample(unit, 500, [](double) { return -3.0; });
  const auto g = GridFunction::sample(unit, 500, [](double t) { return std::cos(t) + t; });
  const auto defect = fracvar::product_rule_defect(c, g, FractionalOrder(0.5));
  EXPECT_LE(max_abs(defect), 1e-10);
}

TEST(ProductRuleDefect, IdentityPairAtRightEnd) {
  const double alpha = 0.5;
  const double expected = oracle::monomial_coefficient(2.0, alpha) - 2.0 * oracle::monomial_coefficient(1.0, alpha);
  EXPECT_NEAR(expected, -0.7522528, 1e-6);
  const auto t = power(1.0, 2000);
  const auto defect = fracvar::product_rule_defect(t, t, FractionalOrder(alpha));
  EXPECT_NEAR(defect.back(), expected, 1e-2);
}

TEST(ProductRuleDefect, ClassicalLeibniz) {
  const auto f = GridFunction::sample(unit, 2000, [](double t) { return std::exp(t); });
  const auto g = GridFunction::sample(unit, 2000, [](double t) { return std::sin(2.0 * t); });
  EXPECT_LE(max_abs(fracvar::product_rule_defect(f, g, FractionalOrder(1.0))), 1e-5);
  const auto t = power(1.0, 2000);
  EXPECT_LE(max_abs(fracvar::product_rule_defect(t, t, FractionalOrder(1.0))), 1e-8);
}

TEST(FundamentalIdentity, Monomials) {
  const FractionalOrder order(0.5);
  for (double g : {0.5, 1.0, 2.0}) {
    EXPECT_LT(std::abs(fracvar::fundamental_identity_residual(power(g, 2000), order)), 1e-3) << g;
  }
  const auto c = GridFunction::sample(unit, 100, [](double) { return 4.0; });
  EXPECT_EQ(fracvar::fundamental_identity_residual(c, order), 0.0);
}
