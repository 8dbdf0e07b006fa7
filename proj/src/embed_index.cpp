#include "ideation/embed_index.hpp"

#include <algorithm>
#include <cmath>

#include "ideation/error.hpp"
#include "jsonl.hpp"

namespace ideation {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::kDimensionMismatch, "embedding must have dim >= 1");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "embedding entry is not finite");
  }
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

double squared_euclidean(const EmbeddingVector& a, const EmbeddingVector& b) {
  return squared_euclidean(a.values(), b.values());
}

EmbeddingIndex::EmbeddingIndex(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::kDimensionMismatch, "index dim must be positive");
}

void EmbeddingIndex::add(std::string id, EmbeddingVector vector) {
  if (vector.dim() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "entry '" + id + "' has dim " +
                                                   std::to_string(vector.dim()) + ", index dim " +
                                                   std::to_string(dim_));
  }
  if (positions_.contains(id)) throw Error(ErrorCode::kDuplicateId, "embedding id '" + id + "'");
  positions_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  vectors_.push_back(std::move(vector));
}

const EmbeddingVector& EmbeddingIndex::at(const std::string& id) const {
  auto it = positions_.find(id);
  if (it == positions_.end()) throw Error(ErrorCode::kMissingId, "no embedding for '" + id + "'");
  return vectors_[it->second];
}

EmbeddingIndex EmbeddingIndex::subset(const IdSet& keep) const {
  EmbeddingIndex out(dim_);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (keep.contains(ids_[i])) out.add(ids_[i], vectors_[i]);
  }
  return out;
}

std::vector<Neighbor> EmbeddingIndex::top_k(const EmbeddingVector& query, std::size_t k,
                                            const IdSet* exclude) const {
  if (query.dim() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "query dim " + std::to_string(query.dim()) +
                                                   ", index dim " + std::to_string(dim_));
  }
  if (k == 0) throw Error(ErrorCode::kInvalidRequest, "top_k requires k >= 1");

  std::vector<Neighbor> candidates;
  candidates.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (exclude != nullptr && exclude->contains(ids_[i])) continue;
    candidates.push_back({ids_[i], squared_euclidean(query.values(), vectors_[i].values())});
  }
  if (candidates.empty()) throw Error(ErrorCode::kEmptyEligibleSet, "no eligible entries");

  const auto closer = [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), closer);
  candidates.resize(take);
  return candidates;
}

EmbeddingVector EmbeddingIndex::centroid(std::span<const std::string> ids) const {
  if (ids.empty()) throw Error(ErrorCode::kEmptyIdSet, "centroid of empty id set");
  std::vector<double> sum(dim_, 0.0);
  for (const auto& id : ids) {
    const auto values = at(id).values();
    for (std::size_t d = 0; d < dim_; ++d) sum[d] += values[d];
  }
  const double count = static_cast<double>(ids.size());
  for (double& v : sum) v /= count;
  return EmbeddingVector(std::move(sum));
}

EmbeddingIndex load_embeddings(const std::filesystem::path& path) {
  std::optional<EmbeddingIndex> index;
  detail::for_each_record(path, [&](const nlohmann::json& record, std::size_t line) {
    const auto dim = record.at("dim").get<std::size_t>();
    auto values = record.at("values").get<std::vector<double>>();
    if (values.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "line " + std::to_string(line) + ": declared dim " + std::to_string(dim) +
                      " but " + std::to_string(values.size()) + " values");
    }
    if (!index) index.emplace(dim);
    if (dim != index->dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "line " + std::to_string(line) + ": dim " + std::to_string(dim) +
                      " differs from first record dim " + std::to_string(index->dim()));
    }
    index->add(record.at("id").get<std::string>(), EmbeddingVector(std::move(values)));
  });
  if (!index) throw Error(ErrorCode::kMalformedRecord, path.string() + " contains no embeddings");
  return std::move(*index);
}

void save_embeddings(const EmbeddingIndex& index, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  for (const auto& id : index.ids()) {
    const auto values = index.at(id).values();
    nlohmann::json record = {{"id", id},
                             {"dim", index.dim()},
                             {"values", std::vector<double>(values.begin(), values.end())}};
    out << detail::canonical(record) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace ideation
