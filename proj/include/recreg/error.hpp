#pragma once

#include <stdexcept>
#include <string>

namespace recreg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed construction arguments (non-positive scale, unknown names, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A recursive update would use a gain gamma_n * Z_n(x) above one.
class ContractionViolation : public Error {
 public:
  using Error::Error;
};

/// Density stepsize beta_n > 1 breaks the convex-combination update.
class InvalidStepsize : public Error {
 public:
  using Error::Error;
};

/// A kernel-weighted ratio has a zero (or numerically zero) denominator.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// The stepsize decays faster than 1/n, so lim (n gamma_n)^-1 is infinite.
class DivergentXi : public Error {
 public:
  using Error::Error;
};

class ZeroDensity : public Error {
 public:
  using Error::Error;
};

/// The hypotheses of the requested limit theorem do not hold.
class ConditionViolated : public Error {
 public:
  using Error::Error;
};

class PoleAtDenominator : public Error {
 public:
  using Error::Error;
};

}  // namespace recreg
