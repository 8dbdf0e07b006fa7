#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ideation {

enum class ErrorCode {
  kMalformedRecord,
  kDanglingReference,
  kDuplicateId,
  kAsymmetricCollaboration,
  kUndefinedBaseline,
  kDimensionMismatch,
  kNonFiniteValue,
  kEmptyEligibleSet,
  kEmptyIdSet,
  kMissingId,
  kInvalidRequest,
  kInvalidConfig,
  kTimeout,
  kTransport,
  kEmptyCompletion,
  kPoolTooSmall,
  kInfeasibleDiversity,
  kMissingProfile,
  kNoEmbeddedPublications,
  kInconsistentBallots,
  kMalformedPermutation,
  kConfidenceOutOfRange,
  kEmptyReviewers,
  kAllBallotsDropped,
  kEmptySplit,
  kNonPositiveMean,
  kUndefinedOn,
  kIo,
  kTrialAborted,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure
/// class so callers and tests can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ideation
