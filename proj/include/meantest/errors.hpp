#ifndef MEANTEST_ERRORS_HPP
#define MEANTEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace meantest {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed user input: bad composition, ragged CSV, invalid config values.
class InvalidInputError : public Error {
public:
  explicit InvalidInputError(const std::string& msg) : Error(msg) {}
};

// Dimension/size mismatches between samples, matrices or vectors.
class DimensionError : public Error {
public:
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// A covariance-type matrix required to be invertible is (numerically) singular.
class SingularCovarianceError : public Error {
public:
  explicit SingularCovarianceError(const std::string& msg) : Error(msg) {}
};

// The hypothesized mean lies outside the convex hull of a sample, so the
// empirical-likelihood weights do not exist. sample_index is 1 or 2 for the
// offending sample in a two-sample call, 0 when unknown.
class ConvexHullError : public Error {
public:
  ConvexHullError(const std::string& msg, int sample_index_)
      : Error(msg), sample_index(sample_index_) {}
  int sample_index;
};

// An iterative solver exhausted its budget; residual carries the final
// constraint violation.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& msg, double residual_)
      : Error(msg), residual(residual_) {}
  double residual;
};

// Requested calibration is undefined for the given inputs (e.g. estimated
// F degrees of freedom too small, or an unsupported test/calibration pair).
class CalibrationError : public Error {
public:
  explicit CalibrationError(const std::string& msg) : Error(msg) {}
};

}  // namespace meantest

#endif
