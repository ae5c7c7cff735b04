#include "specwave/errors.hpp"

namespace specwave {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::AssumptionViolation: return "assumption-violation";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::FitFailure: return "fit-failure";
    case ErrorCode::Inconclusive: return "inconclusive";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace specwave
