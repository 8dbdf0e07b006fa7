#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ideation/corpus.hpp"
#include "ideation/embed_index.hpp"

namespace ideation {

/// Neighbour count used by HD, CD and CI.
inline constexpr std::size_t kMetricNeighbors = 5;

struct Dissimilarity {
  double raw = 0.0;                  // mean squared distance to the neighbours
  std::vector<Neighbor> neighbors;   // ascending by distance
};

/// Historical and contemporary sub-indices for one split.
struct SplitIndex {
  EmbeddingIndex historical;
  EmbeddingIndex contemporary;

  static SplitIndex build(const EmbeddingIndex& index, const CorpusSplit& split);
};

/// Mean squared distance to the min(5, available) nearest entries of
/// `historical`. Throws kEmptySplit when nothing is eligible.
Dissimilarity historical_dissimilarity(const EmbeddingVector& abstract_embedding,
                                       const EmbeddingIndex& historical,
                                       const IdSet* exclude = nullptr);

/// Same computation against the contemporary side.
Dissimilarity contemporary_dissimilarity(const EmbeddingVector& abstract_embedding,
                                         const EmbeddingIndex& contemporary,
                                         const IdSet* exclude = nullptr);

/// Arithmetic mean of the neighbours' citation counts.
double contemporary_impact(std::span<const std::string> neighbor_ids, const Corpus& corpus);

/// raw / corpus_mean; throws kNonPositiveMean.
double normalize(double raw, double corpus_mean);

/// hd * ci / cd; throws kUndefinedOn when cd is not positive.
double overall_novelty(double hd, double cd, double ci);

struct MetricReport {
  double hd_raw = 0.0;
  double cd_raw = 0.0;
  double ci_raw = 0.0;
  double hd = 0.0;
  double cd = 0.0;
  double ci = 0.0;
  std::optional<double> on;  // empty when cd is zero
  std::string on_error;      // reason when `on` is empty
  std::vector<std::string> neighbor_ids_historical;
  std::vector<std::string> neighbor_ids_contemporary;
};

/// Full HD/CD/CI/ON evaluation of one abstract embedding, normalized by the
/// corpus baseline means.
MetricReport evaluate_abstract(const EmbeddingVector& abstract_embedding, const SplitIndex& sides,
                               const Corpus& corpus, const CorpusStats& baseline);

}  // namespace ideation
