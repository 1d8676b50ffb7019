#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace helpcalc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of a library call was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed coefficient expression. `offset` is the byte offset into the
/// source text where the problem was detected.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error("parse error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the domain of an operation (x/0, sqrt(-1), overflow).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid problem definition or config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The ODE integrator gave up. `x_reached` is the last accepted abscissa.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& message, double x_reached)
      : Error(message + " (x reached: " + std::to_string(x_reached) + ")"), x_reached_(x_reached) {}

  double x_reached() const noexcept { return x_reached_; }

 private:
  double x_reached_;
};

/// M was requested too close to one of its poles; use the Laurent pipeline.
class PoleProximityError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown in an algorithm (singular system, impossible branch).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// No pole found in a search bracket. `best_value` is the smallest |g| seen.
class PoleNotFoundError : public Error {
 public:
  PoleNotFoundError(const std::string& message, double best_lambda, double best_value)
      : Error(message), best_lambda_(best_lambda), best_value_(best_value) {}

  double best_lambda() const noexcept { return best_lambda_; }
  double best_value() const noexcept { return best_value_; }

 private:
  double best_lambda_;
  double best_value_;
};

}  // namespace helpcalc
