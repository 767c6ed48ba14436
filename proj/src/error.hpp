#ifndef KCL_ERROR_HPP
#define KCL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kcl {

enum class ErrorCode {
  InvalidArgument,
  DegenerateVector,
  InvalidTarget,
  ShapeMismatch,
  NonFiniteLoss,
  QuadratureFailure,
  EmptyDataset,
  BudgetExceeded,
  EmptySeedSet,
  ConfigError,
  IoError,
  PropertyFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kcl

#endif
