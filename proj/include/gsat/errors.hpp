#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsat {

// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A clause set that does not satisfy the Formula invariants.
class InvalidFormula : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Model count accumulator would overflow and no cap was supplied.
class CountOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// No cell of an accuracy table reaches the requested accuracy.
class UnreachableAccuracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsat
