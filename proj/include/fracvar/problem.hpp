#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <fmt/format.h>

#include "fracvar/errors.hpp"
#include "fracvar/expr.hpp"
#include "fracvar/fracops.hpp"
#include "fracvar/specfun.hpp"

namespace fracvar {

/// Prescribed value y(a) or y(b), or a free end.
class EndpointCondition {
 public:
  static EndpointCondition free_end() { return EndpointCondition(std::nullopt); }

  static EndpointCondition fixed(double value) {
    if (!std::isfinite(value)) throw DomainError("fixed end-point value must be finite");
    return EndpointCondition(value);
  }

  bool is_free() const noexcept { return !value_.has_value(); }
  double value() const {
    if (!value_) throw DomainError("end-point is free and has no value");
    return *value_;
  }

  std::string describe() const { return value_ ? fmt::format("{:.17g}", *value_) : "free"; }

 private:
  explicit EndpointCondition(std::optional<double> v) : value_(v) {}

  std::optional<double> value_;
};

namespace lagrangians {

/// [ (x^a / a!) z^2 - 2 x^a z ]^2 + (t - 1)^2 + (u - 2)^2
struct Example6 {
  double alpha;
  double alpha_factorial;

  double value(const Point& p) const {
    const double bracket = this->bracket(p);
    return bracket * bracket + (p.t - 1.0) * (p.t - 1.0) + (p.u - 2.0) * (p.u - 2.0);
  }

  double partial(Slot s, const Point& p) const {
    switch (s) {
      case Slot::y: return 0.0;
      case Slot::z: {
        const double q = x_power(p.x);
        return 2.0 * bracket(p) * (2.0 * q * p.z / alpha_factorial - 2.0 * q);
      }
      case Slot::t: return 2.0 * (p.t - 1.0);
      case Slot::u: return 2.0 * (p.u - 2.0);
      case Slot::x: break;
    }
    throw DomainError("partial with respect to x is not provided");
  }

  double x_power(double x) const {
    const double q = std::pow(x, alpha);
    if (!std::isfinite(q)) throw EvalError(fmt::format("x^alpha undefined at x = {}", x));
    return q;
  }

  double bracket(const Point& p) const {
    const double q = x_power(p.x);
    return q / alpha_factorial * p.z * p.z - 2.0 * q * p.z;
  }
};

/// z^2 + g t^2 + l (u - 1)^2
struct Example7 {
  double g;
  double l;

  double value(const Point& p) const { return p.z * p.z + g * p.t * p.t + l * (p.u - 1.0) * (p.u - 1.0); }

  double partial(Slot s, const Point& p) const {
    switch (s) {
      case Slot::y: return 0.0;
      case Slot::z: return 2.0 * p.z;
      case Slot::t: return 2.0 * g * p.t;
      case Slot::u: return 2.0 * l * (p.u - 1.0);
      case Slot::x: break;
    }
    throw DomainError("partial with respect to x is not provided");
  }
};

struct Expression {
  Expr expr;
  Parameters parameters;

  double value(const Point& p) const { return eval_expr(expr, EvalEnv{p, &parameters}); }
  double partial(Slot s, const Point& p) const { return fracvar::partial(expr, s, EvalEnv{p, &parameters}); }
};

}  // namespace lagrangians

/// L(x, y, z, t, u) together with its partials in y, z, t, u.
class Lagrangian {
 public:
  static Lagrangian example6(FractionalOrder order) {
    return Lagrangian(lagrangians::Example6{order.value(), alpha_factorial(order)}, "builtin:ex6");
  }

  static Lagrangian example7(double g, double l) {
    return Lagrangian(lagrangians::Example7{g, l}, fmt::format("builtin:ex7(g={}, l={})", g, l));
  }

  /// Every parameter used by `expr` must be bound in `parameters`.
  static Lagrangian expression(Expr expr, Parameters parameters) {
    for (const auto& name : parameter_names(expr)) {
      if (!parameters.contains(name)) throw ConfigError(fmt::format("unbound parameter '{}'", name));
    }
    std::string text = to_string(expr);
    return Lagrangian(lagrangians::Expression{std::move(expr), std::move(parameters)}, std::move(text));
  }

  double operator()(const Point& p) const {
    const double v = std::visit([&](const auto& form) { return form.value(p); }, form_);
    if (!std::isfinite(v)) throw EvalError(fmt::format("Lagrangian is not finite at x = {}", p.x));
    return v;
  }

  double partial(Slot s, const Point& p) const {
    const double v = std::visit([&](const auto& form) { return form.partial(s, p); }, form_);
    if (!std::isfinite(v)) {
      throw EvalError(fmt::format("partial in {} is not finite at x = {}", slot_name(s), p.x));
    }
    return v;
  }

  /// Builtins carry hand-coded partials; expressions use finite differences.
  bool analytic_partials() const noexcept {
    return !std::holds_alternative<lagrangians::Expression>(form_);
  }

  const std::string& describe() const noexcept { return description_; }

 private:
  using Form = std::variant<lagrangians::Example6, lagrangians::Example7, lagrangians::Expression>;

  Lagrangian(Form form, std::string description)
      : form_(std::move(form)), description_(std::move(description)) {}

  Form form_;
  std::string description_;
};

struct VariationalProblem {
  Interval interval;
  FractionalOrder order;
  Lagrangian lagrangian;
  EndpointCondition at_a = EndpointCondition::free_end();
  EndpointCondition at_b = EndpointCondition::free_end();
};

/// Built-in problems: "ex6", "ex7" (parameters g, l > 0) and "classical_ex7" (ex7 at alpha = 1).
/// All live on [0, 1] with both end-points free.
inline VariationalProblem builtin(std::string_view name, FractionalOrder order, const Parameters& params = {}) {
  const auto require_only = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : params) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ConfigError(fmt::format("builtin '{}' takes no parameter '{}'", name, key));
      }
    }
  };
  const auto positive = [&](const char* key) {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError(fmt::format("builtin '{}' requires parameter '{}'", name, key));
    if (!(it->second > 0.0) || !std::isfinite(it->second)) {
      throw ConfigError(fmt::format("builtin '{}' requires {} > 0", name, key));
    }
    return it->second;
  };

  const Interval unit(0.0, 1.0);
  if (name == "ex6") {
    require_only({});
    return {unit, order, Lagrangian::example6(order)};
  }
  if (name == "ex7" || name == "classical_ex7") {
    require_only({"g", "l"});
    const double g = positive("g");
    const double l = positive("l");
    const FractionalOrder used = name == "ex7" ? order : FractionalOrder(1.0);
    return {unit, used, Lagrangian::example7(g, l)};
  }
  throw ConfigError(fmt::format("unknown builtin problem '{}'", name));
}

inline VariationalProblem from_expression(std::string_view source, Interval interval, FractionalOrder order,
                                          EndpointCondition at_a, EndpointCondition at_b,
                                          Parameters params = {}) {
  return {interval, order, Lagrangian::expression(parse_expr(source), std::move(params)), at_a, at_b};
}

}  // namespace fracvar
