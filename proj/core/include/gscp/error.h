#ifndef GSCP_ERROR_H_
#define GSCP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gscp {

enum class ErrorCode {
  kEmptyRow,
  kEmptyColumn,
  kIndexOutOfRange,
  kNegativeCost,
  kInvalidConfig,
  kInfeasibleConfig,
  kTruncatedStream,
  kNonPositiveCount,
  kMalformedFile,
  kVersionMismatch,
  kNonConvergence,
  kSchemaMismatch,
  kLengthMismatch,
  kNonFiniteLoss,
  kTooLarge,
  kInfeasibleWarmStart,
  kIoFailure,
};

std::string_view error_code_name(ErrorCode code);

// All domain failures are reported through this exception; callers that
// need to branch on the cause inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gscp

#endif  // GSCP_ERROR_H_
