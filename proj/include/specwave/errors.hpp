#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specwave {

// Error categories mirrored by the C API status codes and the CLI exit codes.
enum class ErrorCode {
  InvalidArgument,      // bad parameter value or malformed specification
  DimensionMismatch,    // input length does not match basis truncation / node count
  AssumptionViolation,  // a standing assumption (b > 0, lambda0 + m > 0) fails
  Singular,             // negative operator power / Sobolev weight on a zero eigenvalue
  Unsupported,          // requested feature outside the supported problem classes
  Divergence,           // fixed-point iteration failed to contract
  Validation,           // scenario or explicit-operator validation failure
  FitFailure,           // envelope fit impossible on the given window
  Inconclusive,         // reference solver could not certify a comparison
  Io,                   // file read/write failure
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by picard_solve when increments grow for three consecutive
// iterations; carries the observed ratio history for diagnostics.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, std::vector<double> ratios)
      : Error(ErrorCode::Divergence, message), ratios_(std::move(ratios)) {}

  const std::vector<double>& contraction_ratios() const noexcept { return ratios_; }

 private:
  std::vector<double> ratios_;
};

}  // namespace specwave
