#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracvar {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (order, interval, Gamma argument, option value).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse for the discrete operators.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Two grid functions that must share a grid do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed expression text; `offset` is the byte position of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Failure while evaluating an expression or a Lagrangian.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Non-finite objective or similar numeric breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed problem configuration or candidate file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracvar
