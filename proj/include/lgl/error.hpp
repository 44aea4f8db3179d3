#pragma once

#include <stdexcept>
#include <string>

namespace lgl {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network document or configuration file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative special-function evaluation failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested stationary law is a point mass and has no density.
class DegenerateDistribution : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace lgl
