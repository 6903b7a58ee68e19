#pragma once

#include <stdexcept>
#include <string>

namespace plab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or out-of-domain request (bad grid, bad shift, q < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested feature is not available for the given input (e.g. suggested
/// constants for a tabulated nonlinearity).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Failure of a time integration. Carries the time at which it happened.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double time)
      : Error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

  /// Same failure, message prefixed with the task that hit it.
  NumericalError annotated(const std::string& context) const { return NumericalError(context + ": " + what(), time_, 0); }

 private:
  NumericalError(const std::string& message, double time, int) : Error(message), time_(time) {}
  double time_;
};

class BlowUpError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace plab
