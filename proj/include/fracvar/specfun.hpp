#pragma once

#include <cmath>
#include <string>

#include "fracvar/errors.hpp"

namespace fracvar {

/// Order of a Jumarie derivative or of a (dx)^alpha integral, restricted to 0 < alpha <= 1.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0) {
      throw DomainError("fractional order must lie in (0, 1], got " + std::to_string(alpha));
    }
  }

  double value() const noexcept { return alpha_; }
  bool is_classical() const noexcept { return alpha_ == 1.0; }

  friend bool operator==(FractionalOrder, FractionalOrder) = default;

 private:
  double alpha_;
};

/// Gamma function for positive finite arguments.
inline double gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return std::tgamma(x);
}

/// alpha! := Gamma(1 + alpha).
inline double alpha_factorial(FractionalOrder order) { return gamma(1.0 + order.value()); }

}  // namespace fracvar
