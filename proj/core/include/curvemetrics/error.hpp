#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace curvemetrics {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition. `field()` names the offending
/// input when one can be identified.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::string field = {})
      : Error(message), field_(std::move(field)) {}

  [[nodiscard]] auto field() const noexcept -> const std::string& { return field_; }

 private:
  std::string field_;
};

/// Evaluation point outside a curve or distribution domain.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Aggregation scope with zero length or zero probability mass.
class DegenerateScopeError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for this kind of object (e.g. pdf of an empirical
/// distribution).
class UnsupportedOperationError : public Error {
 public:
  using Error::Error;
};

/// Least-squares design matrix is rank deficient.
class SingularFitError : public Error {
 public:
  using Error::Error;
};

/// Named resource (scenario, estimate) does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvemetrics
