#pragma once

#include <stdexcept>
#include <string>

namespace csgap {

/// Malformed input: bad flags, bad files, dimension mismatches.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive path was asked to run beyond its size guard.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, eigensolver failure, or an exhausted iteration budget.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csgap
