#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vccts {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Type errors and partial operations (head of an empty list, open expressions).
class EvalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Unresolved constants, arity mismatches, non-canonical input where canonical is required.
class SyntaxError : public Error {
 public:
  using Error::Error;
};

/// Unguarded recursion detected while computing head forms.
class GuardError : public Error {
 public:
  using Error::Error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

}  // namespace vccts
