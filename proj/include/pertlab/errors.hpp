#pragma once

#include <stdexcept>
#include <string>

namespace pertlab {

// Every failure the library reports derives from Error so callers can map
// it to an exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonNormalizableError : Error {
  using Error::Error;
};

struct InfiniteLambdaError : Error {
  using Error::Error;
};

struct DivergenceError : Error {
  using Error::Error;
};

// A requested hypothesis (finite range, integrability of e^{-2V}, ...) does
// not hold for the configured objects.
struct HypothesisError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct UndefinedRatioError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

/// Too few finite points for a fit.
struct InsufficientDataError : Error {
  using Error::Error;
};

/// Monte Carlo or quadrature could not reach the requested accuracy.
/// The partial estimate is kept for diagnostics.
struct PrecisionError : Error {
  PrecisionError(const std::string& what, double estimate, double stderr_rel)
      : Error(what), estimate(estimate), stderr_rel(stderr_rel) {}
  double estimate;
  double stderr_rel;
};

}  // namespace pertlab
