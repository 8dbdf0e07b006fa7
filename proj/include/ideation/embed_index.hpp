#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ideation {

/// Fixed-dimension embedding. All entries are finite and dim >= 1.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

/// Sum over coordinates of (a_d - b_d)^2. Throws kDimensionMismatch.
double squared_euclidean(std::span<const double> a, std::span<const double> b);
double squared_euclidean(const EmbeddingVector& a, const EmbeddingVector& b);

struct Neighbor {
  std::string id;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

using IdSet = std::unordered_set<std::string>;

/// Exact nearest-neighbour store. Immutable once built; queries are const and
/// safe to run concurrently.
class EmbeddingIndex {
 public:
  explicit EmbeddingIndex(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(const std::string& id) const { return positions_.contains(id); }

  /// Throws kDuplicateId or kDimensionMismatch.
  void add(std::string id, EmbeddingVector vector);

  /// Throws kMissingId.
  const EmbeddingVector& at(const std::string& id) const;

  /// Ids in insertion order.
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// New index over the given ids (kept in this index's insertion order).
  EmbeddingIndex subset(const IdSet& keep) const;

  /// The min(k, |eligible|) nearest eligible entries, ascending by squared
  /// distance with ties broken by lexicographic id.
  std::vector<Neighbor> top_k(const EmbeddingVector& query, std::size_t k,
                              const IdSet* exclude = nullptr) const;

  /// Coordinatewise mean of the vectors for `ids`.
  EmbeddingVector centroid(std::span<const std::string> ids) const;

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<EmbeddingVector> vectors_;
  std::unordered_map<std::string, std::size_t> positions_;
};

/// Sidecar file: one JSON record per line, `{"dim":D,"id":"...","values":[...]}`.
EmbeddingIndex load_embeddings(const std::filesystem::path& path);
void save_embeddings(const EmbeddingIndex& index, const std::filesystem::path& path);

}  // namespace ideation
