#include "ideation/team_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ideation/error.hpp"

namespace ideation {

CollaborationMatrix::CollaborationMatrix(std::vector<std::string> ids)
    : ids_(std::move(ids)), counts_(ids_.size() * ids_.size(), 0) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!positions_.emplace(ids_[i], i).second) throw Error(ErrorCode::kDuplicateId, "matrix id '" + ids_[i] + "'");
  }
}

void CollaborationMatrix::set(std::size_t i, std::size_t j, std::int64_t value) {
  if (i == j) return;
  counts_[i * ids_.size() + j] = value;
  counts_[j * ids_.size() + i] = value;
}

std::size_t CollaborationMatrix::position(const std::string& id) const {
  auto it = positions_.find(id);
  if (it == positions_.end()) throw Error(ErrorCode::kMissingId, "researcher '" + id + "' not in matrix");
  return it->second;
}

CollaborationMatrix build_matrix(const Corpus& corpus) {
  std::vector<std::string> ids;
  for (const auto& r : corpus.researchers()) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  CollaborationMatrix matrix(ids);
  for (const auto& p : corpus.publications()) {
    std::set<std::size_t> authors;
    for (const auto& a : p.author_ids) authors.insert(matrix.position(a));
    for (auto i = authors.begin(); i != authors.end(); ++i) {
      for (auto j = std::next(i); j != authors.end(); ++j) {
        matrix.set(*i, *j, matrix.at(*i, *j) + 1);
      }
    }
  }
  return matrix;
}

CollaborationMatrix smooth(const CollaborationMatrix& matrix) {
  CollaborationMatrix out = matrix;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) out.set(i, j, matrix.at(i, j) + 1);
  }
  return out;
}

std::string KnowledgeProfile::primary_topic() const {
  std::string best;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < topic_tags.size(); ++i) {
    const auto count = static_cast<std::size_t>(std::count(topic_tags.begin(), topic_tags.end(), topic_tags[i]));
    if (count > best_count) {
      best = topic_tags[i];
      best_count = count;
    }
  }
  return best;
}

KnowledgeProfile knowledge_profile(const Corpus& corpus, const EmbeddingIndex& index,
                                   const std::string& researcher_id) {
  const Researcher& r = corpus.researcher(researcher_id);
  std::vector<std::string> embedded;
  for (const auto& pid : r.publication_ids) {
    if (index.contains(pid)) embedded.push_back(pid);
  }
  if (embedded.empty()) {
    throw Error(ErrorCode::kNoEmbeddedPublications, "researcher '" + researcher_id + "'");
  }
  return {r.id, index.centroid(embedded), embedded.size(), r.topics};
}

std::map<std::string, KnowledgeProfile> all_profiles(const Corpus& corpus, const EmbeddingIndex& index) {
  std::map<std::string, KnowledgeProfile> profiles;
  for (const auto& r : corpus.researchers()) {
    try {
      profiles.emplace(r.id, knowledge_profile(corpus, index, r.id));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoEmbeddedPublications) throw;
    }
  }
  return profiles;
}

double knowledge_distance(const KnowledgeProfile& p, const KnowledgeProfile& q) {
  return squared_euclidean(p.centroid, q.centroid);
}

std::vector<std::string> Team::roster() const {
  std::vector<std::string> out{leader};
  out.insert(out.end(), scientists.begin(), scientists.end());
  return out;
}

double team_diversity(const Team& team) {
  const auto members = team.roster();
  std::vector<const KnowledgeProfile*> profiles;
  for (const auto& id : members) {
    auto it = team.profiles.find(id);
    if (it == team.profiles.end()) throw Error(ErrorCode::kMissingProfile, "member '" + id + "'");
    profiles.push_back(&it->second);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (std::size_t j = i + 1; j < profiles.size(); ++j) total += knowledge_distance(*profiles[i], *profiles[j]);
  }
  return total;
}

namespace {

// Draws one of `candidates` with weight = summed counts to `selected`;
// falls back to uniform when every weight is zero.
std::size_t draw_affine(const CollaborationMatrix& m, const std::vector<std::size_t>& selected,
                        const std::vector<std::size_t>& candidates, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(candidates.size());
  double total = 0.0;
  for (std::size_t c : candidates) {
    double w = 0.0;
    for (std::size_t s : selected) w += static_cast<double>(m.at(s, c));
    weights.push_back(w);
    total += w;
  }
  if (total <= 0.0) return candidates[rng.uniform_index(candidates.size())];
  return candidates[rng.weighted_index(weights)];
}

}  // namespace

Team sample_team(const CollaborationMatrix& smoothed,
                 const std::map<std::string, KnowledgeProfile>& profiles,
                 const TeamSamplingOptions& options, Rng& rng) {
  const std::size_t n = options.size;
  if (n < 3) throw Error(ErrorCode::kInvalidConfig, "team size must be at least 3");
  if (!(options.diversity_fraction >= 0.0 && options.diversity_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "diversity_fraction must lie in [0, 1]");
  }
  const std::set<std::string> excluded(options.excluded.begin(), options.excluded.end());

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    const auto& id = smoothed.ids()[i];
    if (profiles.contains(id) && !excluded.contains(id)) pool.push_back(i);
  }
  if (pool.size() < n) {
    throw Error(ErrorCode::kPoolTooSmall,
                "pool has " + std::to_string(pool.size()) + " researchers, team needs " + std::to_string(n));
  }

  const auto topic = [&](std::size_t i) { return profiles.at(smoothed.ids()[i]).primary_topic(); };
  const auto required = static_cast<std::size_t>(
      std::ceil(options.diversity_fraction * static_cast<double>(n - 1) - 1e-9));

  std::vector<std::size_t> feasible_leaders;
  for (std::size_t leader : pool) {
    const auto leader_topic = topic(leader);
    std::size_t distinct = 0;
    for (std::size_t c : pool) {
      if (c != leader && topic(c) != leader_topic) ++distinct;
    }
    if (distinct >= required) feasible_leaders.push_back(leader);
  }
  if (feasible_leaders.empty()) {
    throw Error(ErrorCode::kInfeasibleDiversity,
                "no leader has " + std::to_string(required) + " candidates with a different primary topic");
  }

  const std::size_t leader = feasible_leaders[rng.uniform_index(feasible_leaders.size())];
  const auto leader_topic = topic(leader);
  std::vector<std::size_t> members{leader};
  while (members.size() < n) {
    std::vector<std::size_t> candidates;
    for (std::size_t c : pool) {
      if (std::find(members.begin(), members.end(), c) == members.end()) candidates.push_back(c);
    }
    members.push_back(draw_affine(smoothed, members, candidates, rng));
  }

  std::size_t distinct = 0;
  for (std::size_t s = 1; s < n; ++s) distinct += topic(members[s]) != leader_topic;
  for (std::size_t slot = n - 1; distinct < required && slot >= 1; --slot) {
    if (topic(members[slot]) != leader_topic) continue;
    std::vector<std::size_t> others;
    for (std::size_t s = 0; s < n; ++s) {
      if (s != slot) others.push_back(members[s]);
    }
    std::vector<std::size_t> candidates;
    for (std::size_t c : pool) {
      if (topic(c) != leader_topic && std::find(members.begin(), members.end(), c) == members.end()) {
        candidates.push_back(c);
      }
    }
    members[slot] = draw_affine(smoothed, others, candidates, rng);
    ++distinct;
  }

  Team team;
  team.leader = smoothed.ids()[members[0]];
  for (std::size_t s = 1; s < n; ++s) team.scientists.push_back(smoothed.ids()[members[s]]);
  for (std::size_t m : members) team.profiles.emplace(smoothed.ids()[m], profiles.at(smoothed.ids()[m]));
  return team;
}

Team sample_team(const CollaborationMatrix& smoothed,
                 const std::map<std::string, KnowledgeProfile>& profiles,
                 const TeamSamplingOptions& options, std::uint64_t seed) {
  Rng rng(seed);
  return sample_team(smoothed, profiles, options, rng);
}

}  // namespace ideation
