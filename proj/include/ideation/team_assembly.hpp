#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ideation/corpus.hpp"
#include "ideation/embed_index.hpp"
#include "ideation/rng.hpp"

namespace ideation {

/// Symmetric co-authorship counts over an ordered researcher list. The
/// diagonal is always zero.
class CollaborationMatrix {
 public:
  CollaborationMatrix() = default;
  explicit CollaborationMatrix(std::vector<std::string> ids);

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }

  std::int64_t at(std::size_t i, std::size_t j) const { return counts_[i * ids_.size() + j]; }
  /// Sets both (i,j) and (j,i); ignores the diagonal.
  void set(std::size_t i, std::size_t j, std::int64_t value);
  /// Throws kMissingId.
  std::size_t position(const std::string& id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::int64_t> counts_;
  std::map<std::string, std::size_t> positions_;
};

/// Researchers ordered by id; M[i][j] = publications co-authored by i and j.
CollaborationMatrix build_matrix(const Corpus& corpus);

/// Every off-diagonal entry incremented by exactly one.
CollaborationMatrix smooth(const CollaborationMatrix& matrix);

struct KnowledgeProfile {
  std::string researcher_id;
  EmbeddingVector centroid;
  std::size_t publication_count = 0;  // embedded publications behind the centroid
  std::vector<std::string> topic_tags;

  /// Most frequent tag; earliest listed wins ties; empty when there are none.
  std::string primary_topic() const;
};

/// Centroid of the researcher's embedded publications. Throws
/// kNoEmbeddedPublications.
KnowledgeProfile knowledge_profile(const Corpus& corpus, const EmbeddingIndex& index,
                                   const std::string& researcher_id);

/// Profiles for every researcher with at least one embedded publication.
std::map<std::string, KnowledgeProfile> all_profiles(const Corpus& corpus, const EmbeddingIndex& index);

/// Squared Euclidean distance between centroids.
double knowledge_distance(const KnowledgeProfile& p, const KnowledgeProfile& q);

struct Team {
  std::string leader;
  std::vector<std::string> scientists;
  std::map<std::string, KnowledgeProfile> profiles;

  std::size_t size() const noexcept { return 1 + scientists.size(); }
  /// Leader first, then scientists in order.
  std::vector<std::string> roster() const;
};

/// Sum over unordered member pairs of knowledge_distance. Throws
/// kMissingProfile.
double team_diversity(const Team& team);

struct TeamSamplingOptions {
  std::size_t size = 4;
  double diversity_fraction = 0.0;
  /// Researchers that may not be drawn (e.g. the ideating team).
  std::vector<std::string> excluded;
};

/// Leader uniform over the pool; each further member drawn with probability
/// proportional to its summed counts with the members already selected.
/// Afterwards at least ceil(diversity_fraction * (size - 1)) scientists must
/// have a primary topic different from the leader's; violating slots are
/// re-drawn from the latest slot backwards. The pool is every matrix id that
/// has a profile and is not excluded. Throws kPoolTooSmall or
/// kInfeasibleDiversity.
Team sample_team(const CollaborationMatrix& smoothed,
                 const std::map<std::string, KnowledgeProfile>& profiles,
                 const TeamSamplingOptions& options, Rng& rng);

Team sample_team(const CollaborationMatrix& smoothed,
                 const std::map<std::string, KnowledgeProfile>& profiles,
                 const TeamSamplingOptions& options, std::uint64_t seed);

}  // namespace ideation
