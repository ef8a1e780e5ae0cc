#pragma once

#include <stdexcept>
#include <string>

namespace colsparse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input failed a module precondition (bad JSON, malformed instance, bad flag).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside the range the algorithm is defined for.
class ParamError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Argument outside a function's mathematical domain.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Instance too large for an exhaustive oracle.
class SizeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A digraph has a vertex whose out-degree exceeds the declared bound.
class DegreeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The simulated natural rate of an event is below its attenuation target.
class AttenuationError : public Error {
 public:
  using Error::Error;
};

/// A keep step was reached for a demand whose safety estimate is zero.
class EstimateError : public Error {
 public:
  using Error::Error;
};

/// Internal invariant broken (e.g. a rounded set violates a capacity).
/// Never expected; surfaces as exit code 2 in the CLI.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace colsparse
