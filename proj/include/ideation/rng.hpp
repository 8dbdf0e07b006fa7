#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace ideation {

/// Seeded random source whose derived draws are identical on every platform.
/// The standard distributions are implementation-defined, so uniform and
/// weighted draws are computed here directly from the engine's raw bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Index drawn with probability proportional to `weights[i]`.
  /// Weights must be non-negative with a positive sum.
  std::size_t weighted_index(std::span<const double> weights);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Stable 64-bit FNV-1a hash.
std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t value);

/// Seed for a named sub-stream of `seed` (e.g. "topic", "team").
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

}  // namespace ideation
