#pragma once

#include <stdexcept>
#include <string>

namespace mixkit {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Wrong number of marginals / weights (n < 2, size mismatch, ...).
struct ArityError : Error {
  using Error::Error;
};

// Combination of families / shapes the library does not handle.
struct UnsupportedError : Error {
  using Error::Error;
};

// The mixability condition fails: sum(alpha_i sigma_i) < 2 max(alpha_i sigma_i).
// Carries the signed margin so callers can report it.
struct InfeasibilityError : Error {
  double margin;
  explicit InfeasibilityError(const std::string& what, double m)
      : Error(what), margin(m) {}
};

// An iterative numeric procedure failed to reach its target accuracy.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace mixkit
