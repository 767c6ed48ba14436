#include "error.hpp"

namespace kcl {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateVector: return "DegenerateVector";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptySeedSet: return "EmptySeedSet";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::PropertyFailure: return "PropertyFailure";
  }
  return "UnknownError";
}

}  // namespace kcl
