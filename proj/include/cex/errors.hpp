#pragma once

#include <stdexcept>
#include <string>

namespace cex {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation outside a descriptor's domain; message names the offending point.
struct DomainError : Error {
  using Error::Error;
};

// Unknown gallery / registry name.
struct CatalogError : Error {
  using Error::Error;
};

// Inner function range escaped the outer domain beyond tolerance.
struct CompositionError : Error {
  using Error::Error;
};

// Invalid numeric parameter (delta <= 0, grid < 2, ...).
struct ParameterError : Error {
  using Error::Error;
};

// Exact method requested on a descriptor that has no exact representation.
struct MethodError : Error {
  using Error::Error;
};

// Exact rational arithmetic left the 128-bit range.
struct ArithmeticOverflow : Error {
  using Error::Error;
};

// Sequence fails the required monotonicity at `index`.
struct MonotonicityError : Error {
  int index;
  MonotonicityError(const std::string& what, int idx) : Error(what), index(idx) {}
};

// Construction cannot be built past `max_safe` levels without overflowing counts.
struct DepthLimitError : Error {
  int max_safe;
  DepthLimitError(const std::string& what, int safe) : Error(what), max_safe(safe) {}
};

// Witness search exhausted its budget, or a supplied pair is unusable.
struct WitnessError : Error {
  using Error::Error;
};

}  // namespace cex
