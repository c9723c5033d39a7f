#pragma once

#include <stdexcept>

namespace tamegeo {

// Bad inputs: dimension mismatches, malformed specs, violated preconditions.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation left an expression's domain (division by zero, sqrt of a
// negative, fractional power of a negative base).
struct EvalDomainError : ValidationError {
  using ValidationError::ValidationError;
};

// Numeric failures on valid inputs: non-convergence, degenerate fits,
// resolution exhaustion.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tamegeo
