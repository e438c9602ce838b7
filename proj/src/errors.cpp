#include "homvcp/errors.hpp"

namespace homvcp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroDirection: return "ZeroDirection";
    case ErrorKind::DegenerateRay: return "DegenerateRay";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::InvalidCone: return "InvalidCone";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnknownInstance: return "UnknownInstance";
    case ErrorKind::NonConvex: return "NonConvex";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OutOfValidity: return "OutOfValidity";
    case ErrorKind::NoFeasibleDelta: return "NoFeasibleDelta";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NonSolidCone: return "NonSolidCone";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::NetTooCoarse: return "NetTooCoarse";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::NeitherCase: return "NeitherCase";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace homvcp
