#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ideation/embed_index.hpp"

namespace ideation {

struct Publication {
  std::string id;
  std::string title;
  std::string abstract;
  int year = 0;
  std::string venue;
  std::int64_t citations = 0;
  std::vector<std::string> author_ids;
  std::optional<std::string> external_id;  // e.g. a PMID

  friend bool operator==(const Publication&, const Publication&) = default;
};

struct Researcher {
  std::string id;
  std::string name;
  std::vector<std::string> affiliations;
  std::vector<std::string> topics;
  std::vector<std::string> publication_ids;
  std::map<std::string, std::int64_t> collaborator_counts;

  friend bool operator==(const Researcher&, const Researcher&) = default;
};

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

/// Validated researcher/publication ecosystem. Immutable after construction.
class Corpus {
 public:
  /// Validates record invariants and referential integrity; throws Error.
  Corpus(std::vector<Publication> publications, std::vector<Researcher> researchers);

  const std::vector<Publication>& publications() const noexcept { return publications_; }
  const std::vector<Researcher>& researchers() const noexcept { return researchers_; }

  /// Throws kMissingId.
  const Publication& publication(const std::string& id) const;
  const Researcher& researcher(const std::string& id) const;
  bool has_publication(const std::string& id) const { return pub_pos_.contains(id); }
  bool has_researcher(const std::string& id) const { return res_pos_.contains(id); }

 private:
  std::vector<Publication> publications_;
  std::vector<Researcher> researchers_;
  std::unordered_map<std::string, std::size_t> pub_pos_;
  std::unordered_map<std::string, std::size_t> res_pos_;
};

Corpus load_corpus(const std::filesystem::path& publications_path,
                   const std::filesystem::path& researchers_path);

/// Canonical form: UTF-8, one record per line, keys sorted, records in
/// corpus order.
void save_corpus(const Corpus& corpus, const std::filesystem::path& publications_path,
                 const std::filesystem::path& researchers_path);

std::string to_canonical_line(const Publication& publication);
std::string to_canonical_line(const Researcher& researcher);

struct CorpusSplit {
  std::set<std::string> historical;    // year < pivot_year
  std::set<std::string> contemporary;  // year >= pivot_year
  int pivot_year = 0;
};

CorpusSplit split_by_year(const Corpus& corpus, int pivot_year);

struct CorpusStats {
  double mean_citations_contemporary = 0.0;
  double baseline_mean_hd = 0.0;
  double baseline_mean_cd = 0.0;
  double baseline_mean_ci = 0.0;
  std::size_t sample_size_used = 0;
};

/// Baseline means of raw HD/CD/CI over corpus abstracts, each evaluated with
/// itself excluded from its own neighbour search. `baseline_sample` of
/// nullopt evaluates every publication; otherwise a seeded sample of that
/// size is used. Samples whose leave-self-out search side is empty are
/// skipped for that metric. Throws kUndefinedBaseline when a split side is
/// empty or a mean has no contributing samples.
CorpusStats compute_stats(const Corpus& corpus, const CorpusSplit& split,
                          const EmbeddingIndex& index,
                          std::optional<std::size_t> baseline_sample, std::uint64_t seed);

}  // namespace ideation
