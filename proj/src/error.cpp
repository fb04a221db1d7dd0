#include "jnlab/error.hpp"

namespace jnlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDepthExceeded: return "depth-exceeded";
    case ErrorCode::kZeroMeasure: return "zero-measure";
    case ErrorCode::kConvergenceCheck: return "convergence-check-failure";
    case ErrorCode::kInjectivity: return "injectivity-violation";
    case ErrorCode::kNoPreimage: return "no-preimage-at-depth";
    case ErrorCode::kInsufficientHorizon: return "insufficient-horizon";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kInvalidSplitIndex: return "invalid-split-index";
    case ErrorCode::kInconclusiveAtBudget: return "inconclusive-at-budget";
    case ErrorCode::kAtomicMeasure: return "atomic-measure";
    case ErrorCode::kScheduleSearch: return "schedule-search-failure";
    case ErrorCode::kCertificate: return "certificate-error";
    case ErrorCode::kSchema: return "schema-error";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace jnlab
