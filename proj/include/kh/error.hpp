#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kh {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  OutOfDomain,
  NonFinite,
  MissingDerivative,
  NotConverged,
  NonIntegrable,
  KernelBound,
  NeedsSymmetrizedKernel,
  EmptyInput,
};

std::string_view to_string(ErrorCode code);

/// Structured failure raised by every module. `detail` carries the
/// machine-readable context (offending index, residual, exponent, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace kh
