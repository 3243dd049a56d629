#pragma once

#include <stdexcept>
#include <string>

namespace cormf {

/// Raised when an argument violates an operation's preconditions
/// (dimension mismatch, non-finite entries, bad spin values).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exhaustive computation is asked to run above its size guard.
class GuardError : public std::runtime_error {
 public:
  GuardError(const std::string& what, int limit)
      : std::runtime_error(what), limit_(limit) {}
  int limit() const noexcept { return limit_; }

 private:
  int limit_;
};

/// Raised when an optimizer meets a non-finite objective or gradient.
class NumericAbort : public std::runtime_error {
 public:
  NumericAbort(const std::string& what, long iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

}  // namespace cormf
