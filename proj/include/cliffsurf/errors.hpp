#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cliffsurf {

enum class ErrorCode {
  DimensionMismatch,
  OutOfRange,
  InvalidArgument,
  NotInvertible,
  DegenerateMetric,
  GridTooSmall,
  ShapeMismatch,
  NotClosed,
  NotSphereValued,
  NotMinimal,
  NotHolomorphic,
  WedgeNotZero,
  IllConditionedChi,
  SigmaZero,
  CommutatorNonzero,
  NotGrade2,
  RCapExceeded,
  DegenerateStep,
  Io,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cliffsurf
