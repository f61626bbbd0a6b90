#pragma once

#include <stdexcept>
#include <string>

namespace descentlab {

/// Failure classes. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  kDomain = 1,
  kNumeric = 2,
  kSizeLimit = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

/// A brute-force or dense computation was asked for a size beyond its guard.
class SizeLimitError : public Error {
 public:
  SizeLimitError(const std::string& op, long long requested, long long limit)
      : Error(ErrorKind::kSizeLimit, op + ": size " + std::to_string(requested) +
                                         " exceeds limit " + std::to_string(limit)) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::kNumeric, what) {}
};

/// An iterative solver or truncated series did not reach its tolerance.
class NonConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A transition weight evaluated negative: the supplied chain state is unreachable.
class NegativeWeightError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace descentlab
