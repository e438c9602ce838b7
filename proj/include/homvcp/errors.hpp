#pragma once

#include <stdexcept>
#include <string>

namespace homvcp {

enum class ErrorKind {
  ZeroDirection,
  DegenerateRay,
  DimensionMismatch,
  NumericalFailure,
  InvalidCone,
  SchemaError,
  UnknownInstance,
  NonConvex,
  DomainError,
  OutOfValidity,
  NoFeasibleDelta,
  SolverFailure,
  NonSolidCone,
  BudgetExhausted,
  UnsupportedDimension,
  NetTooCoarse,
  PreconditionViolation,
  NeitherCase,
  IoError,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind() (the CLI
// maps kinds onto exit codes, the service onto HTTP status codes).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace homvcp
