#pragma once

// Shared builders for tests: temp dirs, hand-made records, scripted gateways
// and a toy ecosystem.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ideation/corpus.hpp"
#include "ideation/error.hpp"
#include "ideation/llm_gateway.hpp"
#include "ideation/protocol.hpp"
#include "ideation/toy_corpus.hpp"

namespace fixture {

/// Code of the ideation::Error thrown by `fn`, or nullopt when nothing is.
template <typename Fn>
std::optional<ideation::ErrorCode> thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const ideation::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

ideation::Publication pub(const std::string& id, int year, std::int64_t citations,
                          std::vector<std::string> authors, const std::string& abstract = "");

ideation::Researcher researcher(const std::string& id, std::vector<std::string> publication_ids,
                                std::map<std::string, std::int64_t> collaborators = {},
                                std::vector<std::string> topics = {"general"});

std::shared_ptr<ideation::LlmGateway> scripted(ideation::Script script = ideation::default_script(),
                                               std::size_t embed_dim = 16);

/// Toy corpus embedded through `gateway`, pivot 2011, full baseline.
ideation::Ecosystem toy_ecosystem(ideation::LlmGateway& gateway, ideation::ToyCorpusOptions options = {});

ideation::Team team(const std::string& leader, std::vector<std::string> scientists);

/// Thirteen 2-D publications (H1..H7 before 2011, C1..C6 after) by a single
/// author, with hand-picked coordinates and citation counts.
struct MetricCorpus {
  ideation::Corpus corpus;
  ideation::EmbeddingIndex index;
  std::map<std::string, std::vector<double>> points;
};
MetricCorpus metric_corpus();

}  // namespace fixture
