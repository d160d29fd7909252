#include "gscp/error.h"

namespace gscp {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyRow: return "EmptyRow";
    case ErrorCode::kEmptyColumn: return "EmptyColumn";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNegativeCost: return "NegativeCost";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::kTruncatedStream: return "TruncatedStream";
    case ErrorCode::kNonPositiveCount: return "NonPositiveCount";
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInfeasibleWarmStart: return "InfeasibleWarmStart";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
      code_(code) {}

}  // namespace gscp
