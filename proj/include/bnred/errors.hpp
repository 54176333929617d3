#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnred {

/// Malformed expression or bnet text. `line` is 0 when not applicable,
/// `column` is a 1-based offset into the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string where;
    if (line != 0) where += "line " + std::to_string(line) + ", ";
    where += "column " + std::to_string(column);
    return where + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

/// A decision diagram, trap-space search or exploration ran past its node budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state space is too large for explicit enumeration.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bnred
