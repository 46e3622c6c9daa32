#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace vtplate {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the patch or an otherwise invalid argument domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry: non-positive Jacobian, non-increasing interfaces, non-positive thickness.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class MaterialError : public Error {
 public:
  using Error::Error;
};

/// Inadmissible analytic parameters (tapered ratio, wave count, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class FittingError : public Error {
 public:
  using Error::Error;
};

/// Sparse factorization failed; carries the offending (permuted) pivot.
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, Eigen::Index pivot, double value)
      : Error(what), pivot_(pivot), value_(value) {}
  Eigen::Index pivot() const { return pivot_; }
  double value() const { return value_; }

 private:
  Eigen::Index pivot_;
  double value_;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration exhausted its budget; the last iterate is kept.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_state)
      : Error(what), last_state_(std::move(last_state)) {}
  const Eigen::VectorXd& last_state() const { return last_state_; }

 private:
  Eigen::VectorXd last_state_;
};

/// Configuration problem. `field` names the offending JSON path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace vtplate
