#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fopkit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Out-of-range tuples, arity mismatches, unknown or duplicate symbols.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Evaluation problems: unbound variables, second-order nodes where none are
// allowed, a prefix of the wrong shape.
class EvalError : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed its configured cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace fopkit
