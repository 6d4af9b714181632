#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlts {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: parameter-space violations, malformed series or configs.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  explicit ValidationError(const std::string& what);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Argument outside the domain where a closed form or a derivative exists.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Too little information in the input to pin down a solution.
class UnderdeterminedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Optimizer or quadrature did not reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A stationarity or identification precondition does not hold.
class ConditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlts
