#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

/// Raised when an input violates an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver a trustworthy result
/// (non-convergence, horizon violations, conservation drift).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wqed
