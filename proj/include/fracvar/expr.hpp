#pragma once

// Small arithmetic language for Lagrangians L(x, y, z, t, u).
//
// Grammar (whitespace is insignificant):
//   expression := term (('+' | '-') term)*
//   term       := unary (('*' | '/') unary)*
//   unary      := '-' unary | power
//   power      := primary ('^' unary)?          right-associative, binds tighter than unary '-'
//   primary    := number | name | function '(' expression ')' | '(' expression ')'
//
// Reserved variables are x, y, z, t, u; functions are gamma, abs, exp, ln, sqrt; every other
// name is a parameter bound at evaluation time.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <fmt/format.h>

#include "fracvar/errors.hpp"
#include "fracvar/specfun.hpp"

namespace fracvar {

/// Argument slots of L(x, y, z, t, u): z holds y^(alpha)(x), t holds y(a), u holds y(b).
enum class Slot { x, y, z, t, u };

inline constexpr std::array<Slot, 4> varied_slots{Slot::y, Slot::z, Slot::t, Slot::u};

inline const char* slot_name(Slot s) {
  switch (s) {
    case Slot::x: return "x";
    case Slot::y: return "y";
    case Slot::z: return "z";
    case Slot::t: return "t";
    case Slot::u: return "u";
  }
  return "?";
}

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;
  double u = 0.0;

  double& operator[](Slot s) {
    switch (s) {
      case Slot::x: return x;
      case Slot::y: return y;
      case Slot::z: return z;
      case Slot::t: return t;
      case Slot::u: return u;
    }
    return x;
  }
  double operator[](Slot s) const { return const_cast<Point&>(*this)[s]; }
};

using Parameters = std::map<std::string, double, std::less<>>;

struct EvalEnv {
  Point point;
  const Parameters* parameters = nullptr;
};

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { gamma, abs, exp, ln, sqrt };

inline std::optional<Function> function_by_name(std::string_view name) {
  if (name == "gamma") return Function::gamma;
  if (name == "abs") return Function::abs;
  if (name == "exp") return Function::exp;
  if (name == "ln") return Function::ln;
  if (name == "sqrt") return Function::sqrt;
  return std::nullopt;
}

inline const char* function_name(Function f) {
  switch (f) {
    case Function::gamma: return "gamma";
    case Function::abs: return "abs";
    case Function::exp: return "exp";
    case Function::ln: return "ln";
    case Function::sqrt: return "sqrt";
  }
  return "?";
}

inline std::optional<Slot> slot_by_name(std::string_view name) {
  if (name.size() != 1) return std::nullopt;
  switch (name[0]) {
    case 'x': return Slot::x;
    case 'y': return Slot::y;
    case 'z': return Slot::z;
    case 't': return Slot::t;
    case 'u': return Slot::u;
    default: return std::nullopt;
  }
}

struct ExprNode;

/// Immutable expression tree handle; copies share structure.
class Expr {
 public:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  const ExprNode& node() const noexcept { return *node_; }

  friend bool operator==(const Expr& lhs, const Expr& rhs);

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct Constant {
  double value;
  bool operator==(const Constant&) const = default;
};

struct Variable {
  std::string name;
  std::optional<Slot> slot;  // empty for parameters
  bool operator==(const Variable&) const = default;
};

struct Negate {
  Expr operand;
  bool operator==(const Negate&) const = default;
};

struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
  bool operator==(const Binary&) const = default;
};

struct Call {
  Function fn;
  Expr arg;
  bool operator==(const Call&) const = default;
};

struct ExprNode {
  std::variant<Constant, Variable, Negate, Binary, Call> v;
};

inline bool operator==(const Expr& lhs, const Expr& rhs) {
  return lhs.node_ == rhs.node_ || lhs.node_->v == rhs.node_->v;
}

namespace detail {

template <class T>
Expr make_expr(T&& alt) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{std::forward<T>(alt)}));
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    Expr e = expression();
    skip_ws();
    if (pos_ != src_.size()) {
      if (src_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
      throw ParseError(fmt::format("unexpected '{}'", src_[pos_]), pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_expr(Binary{BinaryOp::add, lhs, term()});
      } else if (accept('-')) {
        lhs = make_expr(Binary{BinaryOp::sub, lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_expr(Binary{BinaryOp::mul, lhs, unary()});
      } else if (accept('/')) {
        lhs = make_expr(Binary{BinaryOp::div, lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return make_expr(Negate{unary()});
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return make_expr(Binary{BinaryOp::pow, base, unary()});
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("expected operand", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expression();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    throw ParseError(fmt::format("expected operand, found '{}'", c), pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    const auto digit = [&](std::size_t i) {
      return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    };
    while (digit(pos_)) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (digit(pos_)) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t k = pos_ + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (digit(k)) {
        pos_ = k;
        while (digit(pos_)) ++pos_;
      }
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{} || end != src_.data() + pos_) throw ParseError("malformed number", start);
    return make_expr(Constant{value});
  }

  Expr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = src_.substr(start, pos_ - start);
    skip_ws();
    const bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (call) {
      const auto fn = function_by_name(id);
      if (!fn) throw ParseError(fmt::format("unknown function '{}'", id), start);
      ++pos_;
      Expr arg = expression();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return make_expr(Call{*fn, arg});
    }
    if (function_by_name(id)) {
      throw ParseError(fmt::format("function '{}' needs an argument list", id), pos_);
    }
    return make_expr(Variable{std::string(id), slot_by_name(id)});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(fmt::format("non-finite result in {}", what));
  return v;
}

}  // namespace detail

/// Parses expression text; throws ParseError carrying the byte offset of the problem.
inline Expr parse_expr(std::string_view source) { return detail::Parser(source).parse(); }

/// Fully parenthesized text that parses back to an equal tree.
inline std::string to_string(const Expr& e) {
  struct Printer {
    std::string operator()(const Constant& c) const { return fmt::format("{:.17g}", c.value); }
    std::string operator()(const Variable& v) const { return v.name; }
    std::string operator()(const Negate& n) const { return "(-" + to_string(n.operand) + ")"; }
    std::string operator()(const Binary& b) const {
      static constexpr const char* ops[] = {" + ", " - ", " * ", " / ", " ^ "};
      return "(" + to_string(b.lhs) + ops[static_cast<int>(b.op)] + to_string(b.rhs) + ")";
    }
    std::string operator()(const Call& c) const {
      return std::string(function_name(c.fn)) + "(" + to_string(c.arg) + ")";
    }
  };
  return std::visit(Printer{}, e.node().v);
}

/// Names of the parameters (non-reserved identifiers) used by an expression.
inline std::set<std::string> parameter_names(const Expr& e) {
  std::set<std::string> out;
  struct Walk {
    std::set<std::string>& out;
    void operator()(const Constant&) const {}
    void operator()(const Variable& v) const {
      if (!v.slot) out.insert(v.name);
    }
    void operator()(const Negate& n) const { std::visit(*this, n.operand.node().v); }
    void operator()(const Binary& b) const {
      std::visit(*this, b.lhs.node().v);
      std::visit(*this, b.rhs.node().v);
    }
    void operator()(const Call& c) const { std::visit(*this, c.arg.node().v); }
  };
  std::visit(Walk{out}, e.node().v);
  return out;
}

inline double eval_expr(const Expr& e, const EvalEnv& env) {
  struct Evaluator {
    const EvalEnv& env;

    double operator()(const Constant& c) const { return c.value; }

    double operator()(const Variable& v) const {
      if (v.slot) return detail::checked(env.point[*v.slot], v.name.c_str());
      if (env.parameters) {
        if (auto it = env.parameters->find(v.name); it != env.parameters->end()) {
          return detail::checked(it->second, v.name.c_str());
        }
      }
      throw EvalError(fmt::format("unbound parameter '{}'", v.name));
    }

    double operator()(const Negate& n) const { return -eval_expr(n.operand, env); }

    double operator()(const Binary& b) const {
      const double l = eval_expr(b.lhs, env);
      const double r = eval_expr(b.rhs, env);
      switch (b.op) {
        case BinaryOp::add: return detail::checked(l + r, "'+'");
        case BinaryOp::sub: return detail::checked(l - r, "'-'");
        case BinaryOp::mul: return detail::checked(l * r, "'*'");
        case BinaryOp::div:
          if (r == 0.0) throw EvalError("division by zero");
          return detail::checked(l / r, "'/'");
        case BinaryOp::pow:
          if (l < 0.0 && r != std::trunc(r)) {
            throw EvalError(fmt::format("negative base {} with fractional exponent {}", l, r));
          }
          return detail::checked(std::pow(l, r), "'^'");
      }
      return 0.0;
    }

    double operator()(const Call& c) const {
      const double a = eval_expr(c.arg, env);
      switch (c.fn) {
        case Function::gamma:
          if (a <= 0.0) throw EvalError(fmt::format("gamma of non-positive argument {}", a));
          return detail::checked(gamma(a), "gamma");
        case Function::abs: return std::abs(a);
        case Function::exp: return detail::checked(std::exp(a), "exp");
        case Function::ln:
          if (a <= 0.0) throw EvalError(fmt::format("ln of non-positive argument {}", a));
          return detail::checked(std::log(a), "ln");
        case Function::sqrt:
          if (a < 0.0) throw EvalError(fmt::format("sqrt of negative argument {}", a));
          return std::sqrt(a);
      }
      return 0.0;
    }
  };
  return std::visit(Evaluator{env}, e.node().v);
}

/// Central finite-difference partial derivative with step 1e-6 * max(1, |value|).
inline double partial(const Expr& e, Slot slot, const EvalEnv& env) {
  const double v = env.point[slot];
  const double h = 1e-6 * std::max(1.0, std::abs(v));
  const double hi = v + h;
  const double lo = v - h;
  EvalEnv probe = env;
  probe.point[slot] = hi;
  const double up = eval_expr(e, probe);
  probe.point[slot] = lo;
  const double down = eval_expr(e, probe);
  return (up - down) / (hi - lo);
}

}  // namespace fracvar
