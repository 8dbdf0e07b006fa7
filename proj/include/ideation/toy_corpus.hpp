#pragma once

#include <cstddef>
#include <cstdint>

#include "ideation/corpus.hpp"

namespace ideation {

struct ToyCorpusOptions {
  std::size_t researchers = 12;
  std::size_t publications = 200;
  std::size_t topics = 4;
  int first_year = 2000;
  int last_year = 2020;
  std::uint64_t seed = 7;
};

/// Small synthetic ecosystem for demos and tests. Every researcher gets one
/// primary topic (round-robin) and at least one publication; co-authors are
/// drawn mostly from the first author's topic so the collaboration graph has
/// structure. Deterministic in `options`.
Corpus make_toy_corpus(const ToyCorpusOptions& options);

}  // namespace ideation
