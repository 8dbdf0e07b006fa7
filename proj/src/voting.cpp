#include "ideation/voting.hpp"

#include <set>

#include "ideation/error.hpp"

namespace ideation {

namespace {

void validate_ballot(const Ballot& ballot, const std::set<std::string>& ideas, std::size_t n) {
  std::set<std::string> ranked;
  for (const auto& [idea, rank] : ballot.ranking) ranked.insert(idea);
  if (ranked != ideas) {
    throw Error(ErrorCode::kInconsistentBallots, "ballot from '" + ballot.reviewer_id + "' ranks a different idea set");
  }
  std::vector<bool> seen(n + 1, false);
  for (const auto& [idea, rank] : ballot.ranking) {
    if (rank < 1 || static_cast<std::size_t>(rank) > n || seen[static_cast<std::size_t>(rank)]) {
      throw Error(ErrorCode::kMalformedPermutation,
                  "ballot from '" + ballot.reviewer_id + "' gives rank " + std::to_string(rank) + " to '" + idea + "'");
    }
    seen[static_cast<std::size_t>(rank)] = true;
  }
  for (const auto& idea : ideas) {
    auto it = ballot.confidences.find(idea);
    if (it == ballot.confidences.end()) {
      throw Error(ErrorCode::kInconsistentBallots, "ballot from '" + ballot.reviewer_id + "' lacks confidence for '" + idea + "'");
    }
    if (it->second < kMinConfidence || it->second > kMaxConfidence) {
      throw Error(ErrorCode::kConfidenceOutOfRange,
                  "ballot from '" + ballot.reviewer_id + "' confidence " + std::to_string(it->second));
    }
  }
  if (ballot.confidences.size() != ideas.size()) {
    throw Error(ErrorCode::kInconsistentBallots, "ballot from '" + ballot.reviewer_id + "' has confidences for unranked ideas");
  }
}

}  // namespace

BordaResult borda_scores(std::span<const Ballot> ballots, std::size_t n) {
  if (ballots.empty()) throw Error(ErrorCode::kInconsistentBallots, "no ballots");
  std::set<std::string> ideas;
  for (const auto& [idea, rank] : ballots.front().ranking) ideas.insert(idea);
  if (ideas.size() != n) {
    throw Error(ErrorCode::kInconsistentBallots,
                "ballots rank " + std::to_string(ideas.size()) + " ideas, expected " + std::to_string(n));
  }
  for (const auto& ballot : ballots) validate_ballot(ballot, ideas, n);

  // Integer totals of (n - r) * c keep mathematically equal scores equal,
  // so the id tie-break is not decided by rounding noise.
  std::map<std::string, long long> totals;
  for (const auto& idea : ideas) totals[idea] = 0;
  for (const auto& ballot : ballots) {
    for (const auto& [idea, rank] : ballot.ranking) {
      totals[idea] += static_cast<long long>(n - static_cast<std::size_t>(rank)) * ballot.confidences.at(idea);
    }
  }
  BordaResult result;
  result.m = ballots.size();
  long long best = -1;
  for (const auto& [idea, total] : totals) {
    result.scores[idea] = static_cast<double>(total) / 10.0;
    if (total > best) {  // map order: first maximum is the smallest id
      best = total;
      result.winner = idea;
    }
  }
  return result;
}

std::map<std::string, std::vector<std::string>> partition_references(
    std::span<const std::string> reference_ids, std::span<const std::string> reviewers) {
  if (reviewers.empty()) throw Error(ErrorCode::kEmptyReviewers, "cannot partition references over no reviewers");
  std::map<std::string, std::vector<std::string>> shares;
  for (const auto& r : reviewers) {
    if (!shares.emplace(r, std::vector<std::string>{}).second) {
      throw Error(ErrorCode::kDuplicateId, "reviewer '" + r + "' listed twice");
    }
  }
  for (std::size_t i = 0; i < reference_ids.size(); ++i) {
    shares[reviewers[i % reviewers.size()]].push_back(reference_ids[i]);
  }
  return shares;
}

}  // namespace ideation
