#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jnlab {

enum class ErrorCode {
  kInvalidArgument,
  kDepthExceeded,
  kZeroMeasure,
  kConvergenceCheck,
  kInjectivity,
  kNoPreimage,
  kInsufficientHorizon,
  kDegenerate,
  kInvalidSplitIndex,
  kInconclusiveAtBudget,
  kAtomicMeasure,
  kScheduleSearch,
  kCertificate,
  kSchema,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jnlab
