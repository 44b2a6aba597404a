#pragma once

#include <stdexcept>
#include <string>

namespace bolab {

/// Input or configuration rejected before any numerics run (CLI exit code 1).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation aborted by a numerical guard (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No frequency tuple satisfies the requested dyadic profile.
class InfeasibleProfile : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace bolab
