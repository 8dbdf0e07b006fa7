#include "ideation/toy_corpus.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "ideation/error.hpp"
#include "ideation/rng.hpp"

namespace ideation {

namespace {

constexpr std::array<const char*, 8> kTopics = {
    "graph neural networks", "protein structure",  "causal inference",   "reinforcement learning",
    "single-cell genomics",  "language modeling",  "climate forecasting", "drug repurposing"};

constexpr std::array<const char*, 16> kWords = {
    "sparse",   "robust",   "scalable",   "adaptive",  "bayesian", "contrastive", "federated", "hierarchical",
    "temporal", "spectral", "multimodal", "efficient", "latent",   "structured",  "generative", "interpretable"};

std::string padded(char prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, n);
  return buf;
}

}  // namespace

Corpus make_toy_corpus(const ToyCorpusOptions& options) {
  if (options.researchers == 0 || options.publications < options.researchers) {
    throw Error(ErrorCode::kInvalidConfig, "toy corpus needs at least one publication per researcher");
  }
  if (options.topics == 0 || options.topics > kTopics.size()) {
    throw Error(ErrorCode::kInvalidConfig, "toy corpus topics must lie in [1, 8]");
  }
  if (options.first_year > options.last_year) {
    throw Error(ErrorCode::kInvalidConfig, "toy corpus year range is empty");
  }
  Rng rng(derive_seed(options.seed, "toy-corpus"));

  std::vector<Researcher> researchers(options.researchers);
  std::vector<std::vector<std::size_t>> by_topic(options.topics);
  for (std::size_t i = 0; i < researchers.size(); ++i) {
    auto& r = researchers[i];
    r.id = padded('R', i + 1, 3);
    r.name = "Researcher " + std::to_string(i + 1);
    r.affiliations = {"Institute " + std::string(1, static_cast<char>('A' + i % 5))};
    const std::size_t topic = i % options.topics;
    r.topics = {kTopics[topic]};
    if (options.topics > 1 && rng.uniform01() < 0.3) r.topics.push_back(kTopics[(topic + 1) % options.topics]);
    by_topic[topic].push_back(i);
  }

  const int span = options.last_year - options.first_year + 1;
  std::vector<Publication> publications(options.publications);
  for (std::size_t p = 0; p < publications.size(); ++p) {
    auto& pub = publications[p];
    pub.id = padded('P', p + 1, 5);
    const std::size_t first = p < researchers.size() ? p : rng.uniform_index(researchers.size());
    const std::size_t topic = first % options.topics;
    pub.author_ids.push_back(researchers[first].id);
    const std::size_t extra = rng.uniform_index(3);
    for (std::size_t a = 0; a < extra; ++a) {
      const auto& pool = by_topic[topic];
      const std::size_t pick = rng.uniform01() < 0.8 ? pool[rng.uniform_index(pool.size())]
                                                     : rng.uniform_index(researchers.size());
      const auto& id = researchers[pick].id;
      if (std::find(pub.author_ids.begin(), pub.author_ids.end(), id) == pub.author_ids.end()) {
        pub.author_ids.push_back(id);
      }
    }
    const char* w1 = kWords[rng.uniform_index(kWords.size())];
    const char* w2 = kWords[rng.uniform_index(kWords.size())];
    pub.title = std::string(w1) + " " + w2 + " methods for " + kTopics[topic];
    pub.abstract = "We study " + std::string(kTopics[topic]) + " with " + w1 + " and " + w2 +
                   " techniques. Experiments on benchmark " + std::to_string(rng.uniform_index(1000)) +
                   " show consistent gains.";
    pub.year = options.first_year + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(span)));
    pub.venue = "Venue " + std::to_string(1 + rng.uniform_index(6));
    // Heavy-ish tail: most papers have few citations, a handful many.
    const double u = rng.uniform01();
    pub.citations = static_cast<std::int64_t>(2.0 / (1.0 - u * 0.98)) - 2 + static_cast<std::int64_t>(rng.uniform_index(5));
  }

  for (const auto& pub : publications) {
    for (const auto& a : pub.author_ids) {
      auto& r = researchers[std::stoul(a.substr(1)) - 1];
      r.publication_ids.push_back(pub.id);
      for (const auto& b : pub.author_ids) {
        if (b != a) ++r.collaborator_counts[b];
      }
    }
  }
  return Corpus(std::move(publications), std::move(researchers));
}

}  // namespace ideation
