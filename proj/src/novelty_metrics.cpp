#include "ideation/novelty_metrics.hpp"

#include "ideation/error.hpp"

namespace ideation {

namespace {

Dissimilarity mean_neighbor_distance(const EmbeddingVector& query, const EmbeddingIndex& side,
                                     const IdSet* exclude, const char* side_name) {
  std::vector<Neighbor> neighbors;
  try {
    if (side.empty()) throw Error(ErrorCode::kEmptyEligibleSet, "empty");
    neighbors = side.top_k(query, kMetricNeighbors, exclude);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyEligibleSet) throw;
    throw Error(ErrorCode::kEmptySplit, std::string(side_name) + " split has no eligible abstracts");
  }
  double sum = 0.0;
  for (const auto& n : neighbors) sum += n.distance;
  return {sum / static_cast<double>(neighbors.size()), std::move(neighbors)};
}

std::vector<std::string> ids_of(const std::vector<Neighbor>& neighbors) {
  std::vector<std::string> ids;
  ids.reserve(neighbors.size());
  for (const auto& n : neighbors) ids.push_back(n.id);
  return ids;
}

}  // namespace

SplitIndex SplitIndex::build(const EmbeddingIndex& index, const CorpusSplit& split) {
  IdSet historical(split.historical.begin(), split.historical.end());
  IdSet contemporary(split.contemporary.begin(), split.contemporary.end());
  for (const auto* side : {&split.historical, &split.contemporary}) {
    for (const auto& id : *side) {
      if (!index.contains(id)) throw Error(ErrorCode::kMissingId, "no embedding for publication '" + id + "'");
    }
  }
  return {index.subset(historical), index.subset(contemporary)};
}

Dissimilarity historical_dissimilarity(const EmbeddingVector& abstract_embedding,
                                       const EmbeddingIndex& historical, const IdSet* exclude) {
  return mean_neighbor_distance(abstract_embedding, historical, exclude, "historical");
}

Dissimilarity contemporary_dissimilarity(const EmbeddingVector& abstract_embedding,
                                         const EmbeddingIndex& contemporary, const IdSet* exclude) {
  return mean_neighbor_distance(abstract_embedding, contemporary, exclude, "contemporary");
}

double contemporary_impact(std::span<const std::string> neighbor_ids, const Corpus& corpus) {
  if (neighbor_ids.empty()) throw Error(ErrorCode::kEmptyIdSet, "contemporary impact needs neighbours");
  double sum = 0.0;
  for (const auto& id : neighbor_ids) {
    if (!corpus.has_publication(id)) throw Error(ErrorCode::kDanglingReference, "neighbour '" + id + "'");
    sum += static_cast<double>(corpus.publication(id).citations);
  }
  return sum / static_cast<double>(neighbor_ids.size());
}

double normalize(double raw, double corpus_mean) {
  if (!(corpus_mean > 0.0)) {
    throw Error(ErrorCode::kNonPositiveMean, "corpus mean " + std::to_string(corpus_mean));
  }
  return raw / corpus_mean;
}

double overall_novelty(double hd, double cd, double ci) {
  if (!(cd > 0.0)) throw Error(ErrorCode::kUndefinedOn, "CD is " + std::to_string(cd));
  return hd * ci / cd;
}

MetricReport evaluate_abstract(const EmbeddingVector& abstract_embedding, const SplitIndex& sides,
                               const Corpus& corpus, const CorpusStats& baseline) {
  MetricReport report;
  auto hd = historical_dissimilarity(abstract_embedding, sides.historical);
  auto cd = contemporary_dissimilarity(abstract_embedding, sides.contemporary);
  report.hd_raw = hd.raw;
  report.cd_raw = cd.raw;
  report.neighbor_ids_historical = ids_of(hd.neighbors);
  report.neighbor_ids_contemporary = ids_of(cd.neighbors);
  report.ci_raw = contemporary_impact(report.neighbor_ids_contemporary, corpus);

  report.hd = normalize(report.hd_raw, baseline.baseline_mean_hd);
  report.cd = normalize(report.cd_raw, baseline.baseline_mean_cd);
  report.ci = normalize(report.ci_raw, baseline.baseline_mean_ci);
  try {
    report.on = overall_novelty(report.hd, report.cd, report.ci);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefinedOn) throw;
    report.on_error = e.what();
  }
  return report;
}

}  // namespace ideation
