#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include <unistd.h>

#include "ideation/experiment.hpp"
#include "ideation/prompts.hpp"

namespace fixture {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("ideation_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

ideation::Publication pub(const std::string& id, int year, std::int64_t citations,
                          std::vector<std::string> authors, const std::string& abstract) {
  ideation::Publication p;
  p.id = id;
  p.title = "Title of " + id;
  p.abstract = abstract.empty() ? "Abstract of " + id : abstract;
  p.year = year;
  p.venue = "Venue";
  p.citations = citations;
  p.author_ids = std::move(authors);
  return p;
}

ideation::Researcher researcher(const std::string& id, std::vector<std::string> publication_ids,
                                std::map<std::string, std::int64_t> collaborators,
                                std::vector<std::string> topics) {
  ideation::Researcher r;
  r.id = id;
  r.name = "Name " + id;
  r.affiliations = {"Lab"};
  r.topics = std::move(topics);
  r.publication_ids = std::move(publication_ids);
  r.collaborator_counts = std::move(collaborators);
  return r;
}

std::shared_ptr<ideation::LlmGateway> scripted(ideation::Script script, std::size_t embed_dim) {
  ideation::BackendConfig config;
  config.kind = ideation::BackendKind::kScripted;
  config.embed_dim = embed_dim;
  return ideation::make_gateway(config, std::move(script));
}

ideation::Ecosystem toy_ecosystem(ideation::LlmGateway& gateway, ideation::ToyCorpusOptions options) {
  ideation::Corpus corpus = ideation::make_toy_corpus(options);
  ideation::EmbeddingIndex index = ideation::embed_corpus(corpus, gateway);
  return ideation::Ecosystem(std::move(corpus), std::move(index), 2011, std::nullopt, 0);
}

ideation::Team team(const std::string& leader, std::vector<std::string> scientists) {
  ideation::Team t;
  t.leader = leader;
  t.scientists = std::move(scientists);
  return t;
}

MetricCorpus metric_corpus() {
  struct Row {
    const char* id;
    int year;
    std::int64_t citations;
    double x, y;
  };
  const Row rows[] = {
      {"H1", 2001, 4, 0, 0},  {"H2", 2002, 9, 1, 0},   {"H3", 2003, 1, 0, 3},  {"H4", 2004, 2, 2, 2},
      {"H5", 2005, 6, -1, 1}, {"H6", 2006, 8, 4, -1},  {"H7", 2007, 3, -2, -2}, {"C1", 2012, 10, 1, 1},
      {"C2", 2013, 20, 3, 0}, {"C3", 2014, 0, 0, -1},  {"C4", 2015, 5, -3, 2}, {"C5", 2016, 7, 2, 5},
      {"C6", 2017, 12, 5, 5},
  };
  std::vector<ideation::Publication> pubs;
  std::vector<std::string> ids;
  ideation::EmbeddingIndex index(2);
  std::map<std::string, std::vector<double>> points;
  for (const auto& r : rows) {
    pubs.push_back(pub(r.id, r.year, r.citations, {"solo"}));
    ids.push_back(r.id);
    index.add(r.id, ideation::EmbeddingVector({r.x, r.y}));
    points[r.id] = {r.x, r.y};
  }
  return {ideation::Corpus(std::move(pubs), {researcher("solo", ids)}), std::move(index), std::move(points)};
}

}  // namespace fixture
