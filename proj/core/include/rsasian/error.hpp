#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsasian {

enum class ErrorCode {
  kValidation,
  kDomain,
  kDegenerateVolatilities,
  kQuadratureNotConverged,
  kInterpolationOutOfRange,
  kExtrapolationRefused,
  kNotApplicable,
  kGridMismatch,
  kLinearSolveFailure,
};

std::string_view to_string(ErrorCode code);

// True for failures that come from the numerics rather than from bad input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rsasian
