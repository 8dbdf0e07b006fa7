#include "ideation/error.hpp"

namespace ideation {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "malformed record";
    case ErrorCode::kDanglingReference: return "dangling reference";
    case ErrorCode::kDuplicateId: return "duplicate id";
    case ErrorCode::kAsymmetricCollaboration: return "asymmetric collaboration counts";
    case ErrorCode::kUndefinedBaseline: return "undefined baseline";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kNonFiniteValue: return "non-finite value";
    case ErrorCode::kEmptyEligibleSet: return "empty eligible set";
    case ErrorCode::kEmptyIdSet: return "empty id set";
    case ErrorCode::kMissingId: return "missing id";
    case ErrorCode::kInvalidRequest: return "invalid request";
    case ErrorCode::kInvalidConfig: return "invalid config";
    case ErrorCode::kTimeout: return "timeout";
    case ErrorCode::kTransport: return "transport error";
    case ErrorCode::kEmptyCompletion: return "empty completion";
    case ErrorCode::kPoolTooSmall: return "pool too small";
    case ErrorCode::kInfeasibleDiversity: return "infeasible diversity fraction";
    case ErrorCode::kMissingProfile: return "missing profile";
    case ErrorCode::kNoEmbeddedPublications: return "no embedded publications";
    case ErrorCode::kInconsistentBallots: return "inconsistent ballots";
    case ErrorCode::kMalformedPermutation: return "malformed permutation";
    case ErrorCode::kConfidenceOutOfRange: return "confidence out of range";
    case ErrorCode::kEmptyReviewers: return "empty reviewer list";
    case ErrorCode::kAllBallotsDropped: return "all ballots dropped";
    case ErrorCode::kEmptySplit: return "empty split";
    case ErrorCode::kNonPositiveMean: return "non-positive mean";
    case ErrorCode::kUndefinedOn: return "undefined overall novelty";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kTrialAborted: return "trial aborted";
  }
  return "unknown error";
}

}  // namespace ideation
