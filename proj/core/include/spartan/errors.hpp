#pragma once

#include <stdexcept>
#include <string>

namespace spartan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally invalid input: non-finite numbers, nonpositive scales,
/// unsupported dimensions, malformed records.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The parameter set violates Bochner permissibility for the requested band.
class PermissibilityError : public Error {
 public:
  using Error::Error;
};

/// A quadrature did not reach the requested tolerance within its budget.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved, double requested)
      : Error(what), achieved_(achieved), requested_(requested) {}

  double achieved() const noexcept { return achieved_; }
  double requested() const noexcept { return requested_; }

 private:
  double achieved_;
  double requested_;
};

/// An integral that diverges analytically. `exponent` is the power of the
/// band cutoff with which the truncated integral grows (0 means logarithmic).
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int exponent)
      : Error(what), exponent_(exponent) {}

  int exponent() const noexcept { return exponent_; }

 private:
  int exponent_;
};

/// A truncated series was asked for fewer terms than its convergence guard
/// requires.
class InsufficientTermsError : public Error {
 public:
  InsufficientTermsError(const std::string& what, int required)
      : Error(what), required_(required) {}

  int required() const noexcept { return required_; }

 private:
  int required_;
};

}  // namespace spartan
