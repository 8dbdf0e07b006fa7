#include "ideation/corpus.hpp"

#include <algorithm>

#include "ideation/error.hpp"
#include "ideation/novelty_metrics.hpp"
#include "ideation/rng.hpp"
#include "jsonl.hpp"

namespace ideation {

namespace {

using nlohmann::json;

std::string where(const std::string& file, std::size_t line) {
  return file + " line " + std::to_string(line) + ": ";
}

Publication parse_publication(const json& record, const std::string& at) {
  Publication p;
  p.id = record.at("id").get<std::string>();
  p.title = record.at("title").get<std::string>();
  p.abstract = record.at("abstract").get<std::string>();
  p.year = record.at("year").get<int>();
  p.venue = record.at("venue").get<std::string>();
  p.citations = record.at("citations").get<std::int64_t>();
  p.author_ids = record.at("author_ids").get<std::vector<std::string>>();
  if (auto it = record.find("external_id"); it != record.end() && !it->is_null()) {
    p.external_id = it->get<std::string>();
  }
  if (p.id.empty()) throw Error(ErrorCode::kMalformedRecord, at + "empty publication id");
  if (p.abstract.empty()) throw Error(ErrorCode::kMalformedRecord, at + "empty abstract for '" + p.id + "'");
  if (p.year < kMinYear || p.year > kMaxYear) {
    throw Error(ErrorCode::kMalformedRecord, at + "year " + std::to_string(p.year) + " out of range");
  }
  if (p.citations < 0) throw Error(ErrorCode::kMalformedRecord, at + "negative citations");
  return p;
}

Researcher parse_researcher(const json& record, const std::string& at) {
  Researcher r;
  r.id = record.at("id").get<std::string>();
  r.name = record.at("name").get<std::string>();
  r.affiliations = record.at("affiliations").get<std::vector<std::string>>();
  r.topics = record.at("topics").get<std::vector<std::string>>();
  r.publication_ids = record.at("publication_ids").get<std::vector<std::string>>();
  r.collaborator_counts = record.at("collaborator_counts").get<std::map<std::string, std::int64_t>>();
  if (r.id.empty()) throw Error(ErrorCode::kMalformedRecord, at + "empty researcher id");
  for (const auto& [other, count] : r.collaborator_counts) {
    if (count < 0) throw Error(ErrorCode::kMalformedRecord, at + "negative collaborator count for '" + other + "'");
  }
  return r;
}

json to_json(const Publication& p) {
  json record = {{"id", p.id},         {"title", p.title},         {"abstract", p.abstract},
                 {"year", p.year},     {"venue", p.venue},         {"citations", p.citations},
                 {"author_ids", p.author_ids}};
  if (p.external_id) record["external_id"] = *p.external_id;
  return record;
}

json to_json(const Researcher& r) {
  return {{"id", r.id},
          {"name", r.name},
          {"affiliations", r.affiliations},
          {"topics", r.topics},
          {"publication_ids", r.publication_ids},
          {"collaborator_counts", r.collaborator_counts}};
}

}  // namespace

Corpus::Corpus(std::vector<Publication> publications, std::vector<Researcher> researchers)
    : publications_(std::move(publications)), researchers_(std::move(researchers)) {
  for (std::size_t i = 0; i < publications_.size(); ++i) {
    if (!pub_pos_.emplace(publications_[i].id, i).second) {
      throw Error(ErrorCode::kDuplicateId, "publication '" + publications_[i].id + "'");
    }
  }
  for (std::size_t i = 0; i < researchers_.size(); ++i) {
    if (!res_pos_.emplace(researchers_[i].id, i).second) {
      throw Error(ErrorCode::kDuplicateId, "researcher '" + researchers_[i].id + "'");
    }
  }
  for (const auto& p : publications_) {
    if (p.abstract.empty()) throw Error(ErrorCode::kMalformedRecord, "empty abstract for '" + p.id + "'");
    if (p.year < kMinYear || p.year > kMaxYear) {
      throw Error(ErrorCode::kMalformedRecord, "year out of range for '" + p.id + "'");
    }
    if (p.citations < 0) throw Error(ErrorCode::kMalformedRecord, "negative citations for '" + p.id + "'");
    for (const auto& author : p.author_ids) {
      if (!res_pos_.contains(author)) {
        throw Error(ErrorCode::kDanglingReference,
                    "publication '" + p.id + "' references unknown author '" + author + "'");
      }
    }
  }
  for (const auto& r : researchers_) {
    for (const auto& pid : r.publication_ids) {
      if (!pub_pos_.contains(pid)) {
        throw Error(ErrorCode::kDanglingReference,
                    "researcher '" + r.id + "' references unknown publication '" + pid + "'");
      }
    }
    for (const auto& [other, count] : r.collaborator_counts) {
      auto it = res_pos_.find(other);
      if (it == res_pos_.end()) {
        throw Error(ErrorCode::kDanglingReference,
                    "researcher '" + r.id + "' lists unknown collaborator '" + other + "'");
      }
      const auto& back = researchers_[it->second].collaborator_counts;
      auto rev = back.find(r.id);
      const std::int64_t reverse = rev == back.end() ? 0 : rev->second;
      if (reverse != count) {
        throw Error(ErrorCode::kAsymmetricCollaboration,
                    r.id + "->" + other + " = " + std::to_string(count) + " but " + other + "->" +
                        r.id + " = " + std::to_string(reverse));
      }
    }
  }
}

const Publication& Corpus::publication(const std::string& id) const {
  auto it = pub_pos_.find(id);
  if (it == pub_pos_.end()) throw Error(ErrorCode::kMissingId, "publication '" + id + "'");
  return publications_[it->second];
}

const Researcher& Corpus::researcher(const std::string& id) const {
  auto it = res_pos_.find(id);
  if (it == res_pos_.end()) throw Error(ErrorCode::kMissingId, "researcher '" + id + "'");
  return researchers_[it->second];
}

Corpus load_corpus(const std::filesystem::path& publications_path,
                   const std::filesystem::path& researchers_path) {
  std::vector<Publication> publications;
  std::vector<Researcher> researchers;
  const auto pub_name = publications_path.filename().string();
  const auto res_name = researchers_path.filename().string();
  detail::for_each_record(publications_path, [&](const json& record, std::size_t line) {
    publications.push_back(parse_publication(record, where(pub_name, line)));
  });
  detail::for_each_record(researchers_path, [&](const json& record, std::size_t line) {
    researchers.push_back(parse_researcher(record, where(res_name, line)));
  });
  return Corpus(std::move(publications), std::move(researchers));
}

std::string to_canonical_line(const Publication& publication) {
  return detail::canonical(to_json(publication));
}

std::string to_canonical_line(const Researcher& researcher) {
  return detail::canonical(to_json(researcher));
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& publications_path,
                 const std::filesystem::path& researchers_path) {
  {
    auto out = detail::open_for_write(publications_path);
    for (const auto& p : corpus.publications()) out << to_canonical_line(p) << '\n';
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + publications_path.string());
  }
  auto out = detail::open_for_write(researchers_path);
  for (const auto& r : corpus.researchers()) out << to_canonical_line(r) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + researchers_path.string());
}

CorpusSplit split_by_year(const Corpus& corpus, int pivot_year) {
  if (pivot_year < kMinYear || pivot_year > kMaxYear) {
    throw Error(ErrorCode::kInvalidConfig, "pivot year " + std::to_string(pivot_year) + " out of range");
  }
  CorpusSplit split;
  split.pivot_year = pivot_year;
  for (const auto& p : corpus.publications()) {
    (p.year < pivot_year ? split.historical : split.contemporary).insert(p.id);
  }
  return split;
}

CorpusStats compute_stats(const Corpus& corpus, const CorpusSplit& split,
                          const EmbeddingIndex& index,
                          std::optional<std::size_t> baseline_sample, std::uint64_t seed) {
  if (split.historical.empty() || split.contemporary.empty()) {
    throw Error(ErrorCode::kUndefinedBaseline,
                split.historical.empty() ? "historical split is empty" : "contemporary split is empty");
  }
  if (baseline_sample && *baseline_sample == 0) {
    throw Error(ErrorCode::kInvalidConfig, "baseline sample size must be positive");
  }

  CorpusStats stats;
  double citation_sum = 0.0;
  for (const auto& id : split.contemporary) {
    citation_sum += static_cast<double>(corpus.publication(id).citations);
  }
  stats.mean_citations_contemporary = citation_sum / static_cast<double>(split.contemporary.size());

  const auto sides = SplitIndex::build(index, split);

  std::vector<std::string> sample;
  sample.reserve(corpus.publications().size());
  for (const auto& p : corpus.publications()) sample.push_back(p.id);
  std::sort(sample.begin(), sample.end());
  if (baseline_sample && *baseline_sample < sample.size()) {
    Rng rng(derive_seed(seed, "baseline-sample"));
    rng.shuffle(sample);
    sample.resize(*baseline_sample);
    std::sort(sample.begin(), sample.end());
  }

  double hd_sum = 0.0, cd_sum = 0.0, ci_sum = 0.0;
  std::size_t hd_count = 0, cd_count = 0;
  for (const auto& id : sample) {
    const IdSet self{id};
    const auto& embedding = index.at(id);
    try {
      hd_sum += historical_dissimilarity(embedding, sides.historical, &self).raw;
      ++hd_count;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptySplit) throw;
    }
    try {
      auto cd = contemporary_dissimilarity(embedding, sides.contemporary, &self);
      std::vector<std::string> ids;
      for (const auto& n : cd.neighbors) ids.push_back(n.id);
      cd_sum += cd.raw;
      ci_sum += contemporary_impact(ids, corpus);
      ++cd_count;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptySplit) throw;
    }
  }
  if (hd_count == 0 || cd_count == 0) {
    throw Error(ErrorCode::kUndefinedBaseline, "no sampled abstract has leave-self-out neighbours");
  }
  stats.baseline_mean_hd = hd_sum / static_cast<double>(hd_count);
  stats.baseline_mean_cd = cd_sum / static_cast<double>(cd_count);
  stats.baseline_mean_ci = ci_sum / static_cast<double>(cd_count);
  stats.sample_size_used = sample.size();
  return stats;
}

}  // namespace ideation
