#pragma once

#include <stdexcept>
#include <string>

namespace hdgmm {

// Base class for all errors raised by the library. The CLI maps
// InputError -> exit 2 and NumericalError -> exit 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

struct DimensionMismatch : InputError {
  using InputError::InputError;
};

struct EmptyInput : InputError {
  using InputError::InputError;
};

struct InvalidSpec : InputError {
  using InputError::InputError;
};

struct TooFewPeriods : InputError {
  using InputError::InputError;
};

struct ParseError : InputError {
  using InputError::InputError;
};

struct NotPositiveDefinite : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateWeight : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateInstrumentVariance : NumericalError {
  using NumericalError::NumericalError;
};

struct NonPositiveVariance : NumericalError {
  using NumericalError::NumericalError;
};

struct MaxIterationsExceeded : NumericalError {
  using NumericalError::NumericalError;
};

struct LpInfeasible : NumericalError {
  using NumericalError::NumericalError;
};

struct LpUnbounded : NumericalError {
  using NumericalError::NumericalError;
};

// Bland's rule guarantees termination; hitting the iteration cap means a bug.
struct CycleDetected : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace hdgmm
