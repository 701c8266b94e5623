#include "kh/error.hpp"

namespace kh {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::OutOfDomain: return "out_of_domain";
    case ErrorCode::NonFinite: return "non_finite";
    case ErrorCode::MissingDerivative: return "missing_derivative";
    case ErrorCode::NotConverged: return "not_converged";
    case ErrorCode::NonIntegrable: return "non_integrable";
    case ErrorCode::KernelBound: return "kernel_bound";
    case ErrorCode::NeedsSymmetrizedKernel: return "needs_symmetrized_kernel";
    case ErrorCode::EmptyInput: return "empty_input";
  }
  return "unknown";
}

}  // namespace kh
