#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ideation/corpus.hpp"
#include "ideation/embed_index.hpp"
#include "ideation/error.hpp"
#include "ideation/llm_gateway.hpp"
#include "ideation/novelty_metrics.hpp"
#include "ideation/prompts.hpp"
#include "ideation/team_assembly.hpp"
#include "ideation/transcript.hpp"
#include "ideation/voting.hpp"

namespace ideation {

enum class ReviewerPool { kInternal, kExternal };

struct RunConfig {
  std::size_t team_size = 4;
  int rounds = 5;
  std::size_t top_k = 8;
  int trials = 20;
  bool enable_discussion = true;
  bool enable_vote = true;
  ReviewerPool reviewer_pool = ReviewerPool::kInternal;
  double diversity_fraction = 0.0;
  std::uint64_t seed = 0;
  /// Recent publication titles surfaced in each agent's profile summary.
  std::size_t profile_titles = 10;
  /// Upper bound on concurrent LLM calls between barriers.
  std::size_t parallelism = 1;

  /// Throws kInvalidConfig.
  void validate() const;
};

/// Everything a trial reads: corpus, embeddings, split, baseline means,
/// smoothed collaboration matrix and knowledge profiles. Immutable.
class Ecosystem {
 public:
  Ecosystem(Corpus corpus, EmbeddingIndex index, int pivot_year,
            std::optional<std::size_t> baseline_sample, std::uint64_t baseline_seed);

  const Corpus& corpus() const noexcept { return corpus_; }
  const EmbeddingIndex& index() const noexcept { return index_; }
  const CorpusSplit& split() const noexcept { return split_; }
  const SplitIndex& sides() const noexcept { return sides_; }
  const CorpusStats& stats() const noexcept { return stats_; }
  const CollaborationMatrix& smoothed_matrix() const noexcept { return smoothed_; }
  const std::map<std::string, KnowledgeProfile>& profiles() const noexcept { return profiles_; }

 private:
  Corpus corpus_;
  EmbeddingIndex index_;
  CorpusSplit split_;
  SplitIndex sides_;
  CorpusStats stats_;
  CollaborationMatrix smoothed_;
  std::map<std::string, KnowledgeProfile> profiles_;
};

/// Profile summary shown to an agent: affiliations, topics and the titles
/// of its most recent publications.
std::string profile_summary(const Corpus& corpus, const std::string& researcher_id, std::size_t max_titles);

/// Per-trial engine state: the transcript, the seed, and an optional replay
/// log that serves recorded replies for calls whose request hash matches,
/// so an aborted trial resumes from its checkpoint.
class TrialSession {
 public:
  TrialSession(LlmGateway& gateway, const PromptBundle& prompts, const RunConfig& config,
               const Corpus& corpus, std::uint64_t seed, std::vector<Event> replay = {});

  struct Call {
    std::string agent;
    std::string tag;       // e.g. "IDEA:"
    std::string body;      // user message after the tag line
    Event event;           // stage/round/kind/sender/receiver/idea_id; payload filled on reply
    std::vector<ChatMessage> prior;  // earlier turns for re-prompts
  };

  /// Executes the calls (concurrently up to the configured bound) and
  /// appends one event per call in the given order.
  std::vector<std::string> call_batch(std::vector<Call> calls);
  std::string call(Call c);

  Transcript& transcript() noexcept { return transcript_; }
  const PromptBundle& prompts() const noexcept { return prompts_; }
  const RunConfig& config() const noexcept { return config_; }
  LlmGateway& gateway() noexcept { return gateway_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t replayed_calls() const noexcept { return replayed_; }

  /// Persona system prompt for `agent`, cached per agent.
  const std::string& persona(const std::string& agent);

 private:
  ChatRequest build_request(const Call& c);

  LlmGateway& gateway_;
  const PromptBundle& prompts_;
  const RunConfig& config_;
  const Corpus& corpus_;
  std::uint64_t seed_;
  Transcript transcript_;
  std::vector<Event> replay_;
  std::size_t replay_cursor_ = 0;
  std::size_t replayed_ = 0;
  std::map<std::string, std::string> personas_;
};

/// Optional checkpoint target plus events to replay.
struct TrialOptions {
  std::filesystem::path checkpoint_path;
  std::vector<Event> resume_events;
};

/// Thrown when a stage fails; carries the partial transcript.
class TrialAborted : public Error {
 public:
  TrialAborted(const std::string& message, Transcript partial)
      : Error(ErrorCode::kTrialAborted, message), partial_(std::move(partial)) {}
  const Transcript& partial() const noexcept { return partial_; }

 private:
  Transcript partial_;
};

/// Parses "1: 7" style lines into one score per proposal; nullopt unless
/// every proposal 1..count has a score in [1, 10].
std::optional<std::vector<int>> parse_topic_scores(std::string_view reply, std::size_t count);

/// Proposal index drawn with probability proportional to its mean score.
std::size_t select_topic(std::span<const double> mean_scores, Rng& rng);

/// Parses "RANKING: a > b > c" and "CONFIDENCE: a=7, b=5, c=9"; nullopt
/// unless the ranking is a strict permutation of `idea_ids` and every
/// confidence lies in [1, 10].
std::optional<Ballot> parse_ballot(std::string_view reply, const std::string& reviewer_id,
                                   std::span<const std::string> idea_ids);

/// Parses "WINNER: id"; nullopt unless id is one of `idea_ids`.
std::optional<std::string> parse_winner(std::string_view reply, std::span<const std::string> idea_ids);

/// Stage 1: sequential proposals by every agent in roster order, then every
/// agent scores every proposal; the topic is sampled proportionally to the
/// mean scores. Unparsable scores after one re-prompt default to 5.
std::string run_topic_discussion(const Team& team, TrialSession& session);

/// Base prompt followed by the title and abstract of the k publications
/// nearest to `idea_text`, nearest first. k = 0 leaves the prompt unchanged.
std::string augment_prompt(std::string_view base_prompt, std::string_view idea_text,
                           const EmbeddingIndex& index, const Corpus& corpus, std::size_t k,
                           LlmGateway& gateway);

/// Stage 2: `rounds` knowledge-exchange cycles. Returns the final round's
/// records, with embeddings of the final texts.
std::vector<IdeaRecord> run_idea_generation(const Team& team, const std::string& topic,
                                            const Ecosystem& ecosystem, TrialSession& session);

struct NoveltyOutcome {
  BordaResult result;
  IdeaRecord winner;
  std::vector<std::string> reference_pool;
  std::map<std::string, std::vector<std::string>> shares;
  std::vector<std::string> reviewers;
};

/// Deduplicated union of the per-idea top-k sets, ordered by each
/// publication's minimum distance to any idea, ties by id.
std::vector<std::string> pooled_references(std::span<const IdeaRecord> ideas, const EmbeddingIndex& index,
                                           std::size_t k);

/// Stage 3: reviewers rank the ideas over disjoint reference shares and the
/// weighted Borda winner is selected; with voting disabled the leader picks.
NoveltyOutcome run_check_novelty(const Team& team, const std::vector<IdeaRecord>& ideas,
                                 const Ecosystem& ecosystem, TrialSession& session);

/// Stage 4: the originator drafts, then every other agent refines once in
/// roster order.
std::string run_abstract_generation(const Team& team, const IdeaRecord& winner, TrialSession& session);

struct TrialResult {
  Transcript transcript;
  MetricReport metrics;
  EmbeddingVector abstract_embedding;
};

/// All four stages, then the final abstract's metrics. Any stage failure
/// writes the partial transcript to `options.checkpoint_path` (when set) and
/// throws TrialAborted.
TrialResult run_trial(const Ecosystem& ecosystem, const RunConfig& config, LlmGateway& gateway,
                      const PromptBundle& prompts, const TrialOptions& options = {});

}  // namespace ideation
