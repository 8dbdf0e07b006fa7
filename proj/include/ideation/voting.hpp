#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ideation {

inline constexpr int kMinConfidence = 1;
inline constexpr int kMaxConfidence = 10;

/// One reviewer's strict ranking (1 = best) and per-idea confidence.
struct Ballot {
  std::string reviewer_id;
  std::map<std::string, int> ranking;
  std::map<std::string, int> confidences;

  friend bool operator==(const Ballot&, const Ballot&) = default;
};

struct BordaResult {
  std::map<std::string, double> scores;
  std::string winner;
  std::size_t m = 0;  // ballots counted
};

/// Weighted Borda count: B_k = sum_j (n - r_jk) * c_jk / 10. The winner has
/// the highest score; ties go to the lexicographically smallest idea id.
/// Throws kInconsistentBallots, kMalformedPermutation or
/// kConfidenceOutOfRange.
BordaResult borda_scores(std::span<const Ballot> ballots, std::size_t n);

/// Round-robin deal of `reference_ids` (already in ascending-distance order)
/// over `reviewers`. Throws kEmptyReviewers or kDuplicateId.
std::map<std::string, std::vector<std::string>> partition_references(
    std::span<const std::string> reference_ids, std::span<const std::string> reviewers);

}  // namespace ideation
