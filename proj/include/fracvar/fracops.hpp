#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fracvar/errors.hpp"
#include "fracvar/specfun.hpp"

namespace fracvar {

inline constexpr std::size_t default_grid = 1000;
inline constexpr std::size_t min_grid = 4;

/// Closed interval [a, b] with finite a < b.
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
      throw DomainError("interval requires finite a < b, got [" + std::to_string(a) + ", " +
                        std::to_string(b) + "]");
    }
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

/// Samples of a continuous function on the uniform grid a + i*(b-a)/n, i = 0..n.
class GridFunction {
 public:
  GridFunction(Interval interval, std::vector<double> values)
      : interval_(interval), values_(std::move(values)) {
    if (values_.size() < min_grid + 1) {
      throw GridError("grid too coarse: need at least " + std::to_string(min_grid) +
                      " subintervals, got " +
                      std::to_string(values_.empty() ? 0 : values_.size() - 1));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw DomainError("grid value at node " + std::to_string(i) + " is not finite");
      }
    }
  }

  template <class F>
  static GridFunction sample(Interval interval, std::size_t n, F&& f) {
    if (n < min_grid) {
      throw GridError("grid too coarse: need at least " + std::to_string(min_grid) +
                      " subintervals, got " + std::to_string(n));
    }
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(node(interval, n, i));
    return GridFunction(interval, std::move(values));
  }

  /// Node i of an n-subinterval grid; the last node is exactly b.
  static double node(const Interval& interval, std::size_t n, std::size_t i) noexcept {
    if (i == n) return interval.b();
    return interval.a() + static_cast<double>(i) * (interval.length() / static_cast<double>(n));
  }

  const Interval& interval() const noexcept { return interval_; }
  std::size_t intervals() const noexcept { return values_.size() - 1; }
  double step() const noexcept { return interval_.length() / static_cast<double>(intervals()); }
  double node(std::size_t i) const noexcept { return node(interval_, intervals(), i); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }

  bool same_grid(const GridFunction& other) const noexcept {
    return interval_ == other.interval_ && values_.size() == other.values_.size();
  }

  /// Nodewise op(this[i], other[i]).
  template <class Op>
  GridFunction zip(const GridFunction& other, Op op) const {
    require_same_grid(other);
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(values_[i], other.values_[i]);
    return GridFunction(interval_, std::move(out));
  }

  void require_same_grid(const GridFunction& other) const {
    if (!same_grid(other)) throw ShapeError("grid functions live on different grids");
  }

 private:
  Interval interval_;
  std::vector<double> values_;
};

/// Exact Jumarie derivative of t^gamma: coefficient * t^exponent.
struct MonomialSymbol {
  double coefficient;
  double exponent;
};

inline MonomialSymbol monomial_derivative(double gamma_exp, FractionalOrder order) {
  const double alpha = order.value();
  if (!std::isfinite(gamma_exp) || gamma_exp <= 0.0) {
    throw DomainError("monomial exponent must be positive, got " + std::to_string(gamma_exp));
  }
  if (gamma_exp + 1.0 - alpha <= 0.0) {
    throw DomainError("monomial derivative undefined for gamma + 1 - alpha <= 0");
  }
  return {gamma(gamma_exp + 1.0) / gamma(gamma_exp + 1.0 - alpha), gamma_exp - alpha};
}

namespace detail {

/// (k+1)^p + (k-1)^p - 2 k^p without the cancellation of the naive form.
inline double second_difference_of_power(std::size_t k, double p) {
  if (k == 1) return std::pow(2.0, p) - 2.0;
  const double kk = static_cast<double>(k);
  const double inv = 1.0 / kk;
  return std::pow(kk, p) * (std::expm1(p * std::log1p(inv)) + std::expm1(p * std::log1p(-inv)));
}

/// Weights of the product trapezoidal rule
///   int_{t_0}^{t_i} (t_i - s)^{beta-1} g(s) ds  ~  h^beta / (beta (beta+1)) * sum_j w_j g_j,
/// exact for piecewise-linear g. Entry j of the result multiplies g_j, j = 0..i.
class ProductWeights {
 public:
  ProductWeights(double beta, std::size_t n) : beta_(beta), diff_(n + 1), pow_beta_(n + 1) {
    for (std::size_t k = 1; k <= n; ++k) {
      diff_[k] = second_difference_of_power(k, beta + 1.0);
      pow_beta_[k] = std::pow(static_cast<double>(k), beta);
    }
  }

  double beta() const noexcept { return beta_; }
  double scale() const noexcept { return 1.0 / (beta_ * (beta_ + 1.0)); }

  /// Weight of node j in row i (unscaled).
  double operator()(std::size_t i, std::size_t j) const {
    if (j == i) return 1.0;
    if (j == 0) {
      const double im1 = static_cast<double>(i - 1);
      return std::pow(im1, beta_ + 1.0) - (im1 - beta_) * pow_beta_[i];
    }
    return diff_[i - j];
  }

  /// Unscaled sum_j w_ij g_j.
  double apply(std::size_t i, std::span<const double> g) const {
    if (i == 0) return 0.0;
    double acc = (*this)(i, 0) * g[0] + g[i];
    for (std::size_t j = 1; j < i; ++j) acc += diff_[i - j] * g[j];
    return acc;
  }

 private:
  double beta_;
  std::vector<double> diff_;
  std::vector<double> pow_beta_;
};

/// Exponents (t-a)^sigma that a Jumarie-regular grid function is expected to contain near a:
/// sigma = k*alpha below 0.9 (at most four of them), plus sigma = 1 so linear data stays exact.
inline std::vector<double> starting_exponents(double alpha, std::size_t n) {
  std::vector<double> sigmas;
  for (int k = 1; k * alpha <= 0.9 && sigmas.size() < 4; ++k) sigmas.push_back(k * alpha);
  while (!sigmas.empty() && sigmas.size() + 1 > n - 1) sigmas.pop_back();
  if (sigmas.empty()) return {};
  sigmas.push_back(1.0);
  return sigmas;
}

/// Riemann-Liouville integral of order beta = 1 - alpha of g = f - f(a) at every node:
///   F_i = 1/Gamma(beta) int_a^{t_i} (t_i - s)^{-alpha} g(s) ds.
/// Product trapezoidal rule plus starting weights on nodes 1..M that make the rule exact for
/// (s-a)^sigma, sigma in starting_exponents(alpha).
inline std::vector<double> fractional_primitive(const GridFunction& f, double alpha) {
  const std::size_t n = f.intervals();
  const double beta = 1.0 - alpha;
  const double h = f.step();

  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = f[i] - f[0];

  const ProductWeights w(beta, n);
  const std::vector<double> sigmas = starting_exponents(alpha, n);
  const auto m = static_cast<Eigen::Index>(sigmas.size());

  Eigen::MatrixXd vander(m, m);
  std::vector<std::vector<double>> node_powers(sigmas.size(), std::vector<double>(n + 1));
  std::vector<double> beta_fn(sigmas.size());
  for (std::size_t l = 0; l < sigmas.size(); ++l) {
    for (std::size_t j = 0; j <= n; ++j) {
      node_powers[l][j] = std::pow(static_cast<double>(j), sigmas[l]);
    }
    for (Eigen::Index c = 0; c < m; ++c) {
      vander(static_cast<Eigen::Index>(l), c) = node_powers[l][static_cast<std::size_t>(c) + 1];
    }
    beta_fn[l] = gamma(beta) * gamma(sigmas[l] + 1.0) / gamma(beta + sigmas[l] + 1.0);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu =
      m > 0 ? Eigen::PartialPivLU<Eigen::MatrixXd>(vander) : Eigen::PartialPivLU<Eigen::MatrixXd>();

  std::vector<double> primitive(n + 1, 0.0);
  Eigen::VectorXd defect(m);
  for (std::size_t i = 1; i <= n; ++i) {
    double acc = w.apply(i, g) * w.scale();
    if (m > 0) {
      const double di = static_cast<double>(i);
      for (std::size_t l = 0; l < sigmas.size(); ++l) {
        defect(static_cast<Eigen::Index>(l)) =
            beta_fn[l] * std::pow(di, beta + sigmas[l]) - w.apply(i, node_powers[l]) * w.scale();
      }
      const Eigen::VectorXd start = lu.solve(defect);
      for (Eigen::Index c = 0; c < m; ++c) acc += start(c) * g[static_cast<std::size_t>(c) + 1];
    }
    primitive[i] = acc * std::pow(h, beta) / gamma(beta);
  }
  return primitive;
}

/// Second-order finite-difference derivative: central inside, one-sided at both ends.
inline std::vector<double> difference(std::span<const double> v, double h) {
  const std::size_t n = v.size() - 1;
  std::vector<double> d(n + 1);
  for (std::size_t i = 1; i < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
  return d;
}

}  // namespace detail

/// Jumarie derivative of order alpha on the grid of f.
///
/// For alpha < 1 the fractional primitive of f - f(a) is formed by product integration against
/// the weakly singular kernel and then differenced; alpha = 1 is the classical derivative.
/// Node 0 comes from the one-sided difference; use boundary_value_at_a() where a smoother
/// boundary value is needed.
inline GridFunction jumarie_derivative(const GridFunction& f, FractionalOrder order) {
  if (order.is_classical()) {
    return GridFunction(f.interval(), detail::difference(f.values(), f.step()));
  }
  const std::vector<double> primitive = detail::fractional_primitive(f, order.value());
  return GridFunction(f.interval(), detail::difference(primitive, f.step()));
}

/// int_a^b f(s) (ds)^alpha = alpha * int_a^b (b-s)^{alpha-1} f(s) ds, product trapezoidal rule.
inline double fractional_integral(const GridFunction& f, FractionalOrder order) {
  const std::size_t n = f.intervals();
  const double h = f.step();
  const auto v = f.values();
  if (order.is_classical()) {
    double acc = 0.5 * (v[0] + v[n]);
    for (std::size_t i = 1; i < n; ++i) acc += v[i];
    return acc * h;
  }
  const double alpha = order.value();
  const detail::ProductWeights w(alpha, n);
  return alpha * w.scale() * std::pow(h, alpha) * w.apply(n, v);
}

/// Quadratic extrapolation of the value at a from nodes 1, 2, 3.
inline double boundary_value_at_a(const GridFunction& f) { return 3.0 * f[1] - 3.0 * f[2] + f[3]; }

/// Quadratic extrapolation of the value at b from nodes n-1, n-2, n-3.
inline double boundary_value_at_b(const GridFunction& f) {
  const std::size_t n = f.intervals();
  return 3.0 * f[n - 1] - 3.0 * f[n - 2] + f[n - 3];
}

/// LHS - RHS of the integration-by-parts formula
///   int u^(a) v (dt)^a = a! [u v]_a^b - int u v^(a) (dt)^a.
inline double ibp_defect(const GridFunction& u, const GridFunction& v, FractionalOrder order) {
  u.require_same_grid(v);
  const GridFunction du = jumarie_derivative(u, order);
  const GridFunction dv = jumarie_derivative(v, order);
  const auto mul = [](double p, double q) { return p * q; };
  const double lhs = fractional_integral(du.zip(v, mul), order);
  const double rhs = alpha_factorial(order) * (u.back() * v.back() - u.front() * v.front()) -
                     fractional_integral(u.zip(dv, mul), order);
  return lhs - rhs;
}

/// (fg)^(a) - f^(a) g - f g^(a), nodewise.
inline GridFunction product_rule_defect(const GridFunction& f, const GridFunction& g,
                                        FractionalOrder order) {
  f.require_same_grid(g);
  const GridFunction fg = f.zip(g, [](double p, double q) { return p * q; });
  const GridFunction dfg = jumarie_derivative(fg, order);
  const GridFunction df = jumarie_derivative(f, order);
  const GridFunction dg = jumarie_derivative(g, order);
  std::vector<double> out(f.intervals() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dfg[i] - df[i] * g[i] - f[i] * dg[i];
  return GridFunction(f.interval(), std::move(out));
}

/// int_a^b v^(a) (dt)^a - a! (v(b) - v(a)).
inline double fundamental_identity_residual(const GridFunction& v, FractionalOrder order) {
  return fractional_integral(jumarie_derivative(v, order), order) -
         alpha_factorial(order) * (v.back() - v.front());
}

}  // namespace fracvar
