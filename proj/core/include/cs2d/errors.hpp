#pragma once

#include <stdexcept>
#include <string>

namespace cs2d {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configuration value violates a physical or structural constraint.
/// `field()` names the offending field so callers can report it.
class InvalidConfig : public Error {
public:
  InvalidConfig(std::string field, const std::string& constraint)
      : Error(field + ": " + constraint), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Lattice contrast vanishes (polarization angle at or beyond pi/2).
class DegenerateLattice : public InvalidConfig {
public:
  using InvalidConfig::InvalidConfig;
};

/// The requested configuration is outside what the model covers.
class UnsupportedConfiguration : public Error {
public:
  using Error::Error;
};

/// Failure of a numerical procedure (integration, solve, fit, sampler).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// The rate matrix has more than one stationary distribution.
class AmbiguousSteadyState : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// sigma*g exceeded the collision majorant, or the per-step collision
/// probability got too large. The engine retries with a smaller step.
class MajorantOverflow : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class CrossSectionOverflow : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class FitError : public NumericalError {
public:
  FitError(const std::string& what, double residual_rms)
      : NumericalError(what), residual_rms_(residual_rms) {}
  double residual_rms() const noexcept { return residual_rms_; }

private:
  double residual_rms_;
};

}  // namespace cs2d
