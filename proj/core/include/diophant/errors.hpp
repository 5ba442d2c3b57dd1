#pragma once

#include <stdexcept>
#include <string>

namespace diophant {

// Every failure raised by the library derives from Error and carries a kind
// that the CLI maps onto its exit codes.
enum class ErrorKind {
  kInvalidArgument,
  kResourceLimit,
  kSaturation,
  kPrecondition,
  kPrecision,
  kInvariant,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::kInvalidArgument, what) {}
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what)
      : Error(ErrorKind::kResourceLimit, what) {}
};

/// Raised when a radius exceeds 1/(2q), the point at which A_q covers [0,1].
class SaturationError : public Error {
 public:
  SaturationError(const std::string& what, unsigned long long q)
      : Error(ErrorKind::kSaturation, what), q_(q) {}

  unsigned long long q() const noexcept { return q_; }

 private:
  unsigned long long q_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::kPrecondition, what) {}
};

/// A certified comparison or expansion could not be decided at the
/// largest precision allowed.
class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what)
      : Error(ErrorKind::kPrecision, what) {}
};

/// An internal postcondition failed. Always a defect.
class InvariantFailure : public Error {
 public:
  explicit InvariantFailure(const std::string& what)
      : Error(ErrorKind::kInvariant, what) {}
};

}  // namespace diophant
