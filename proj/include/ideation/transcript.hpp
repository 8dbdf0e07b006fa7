#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ideation/embed_index.hpp"
#include "ideation/voting.hpp"

namespace ideation {

namespace stage {
inline constexpr std::string_view kTeam = "team_assembly";
inline constexpr std::string_view kTopic = "topic_discussion";
inline constexpr std::string_view kIdea = "idea_generation";
inline constexpr std::string_view kNovelty = "check_novelty";
inline constexpr std::string_view kAbstract = "abstract_generation";
}  // namespace stage

/// One transcript entry. `seq` is a logical clock: events are appended in
/// (stage, round, idea, agent) order, never wall-clock order.
struct Event {
  std::uint64_t seq = 0;
  std::string stage;
  int round = 0;
  std::string kind;
  std::string sender;
  std::string receiver;
  std::string idea_id;
  std::string payload;
  bool llm_call = false;
  std::uint64_t request_hash = 0;  // LLM calls only
  std::string flag;                // non-empty when the event records a fallback

  friend bool operator==(const Event&, const Event&) = default;
};

/// Lineage of one idea through a knowledge-exchange round.
struct IdeaRecord {
  std::string idea_id;
  std::string originator;
  int round = 0;
  std::string initial;
  std::map<std::string, std::string> revisions;  // reviser -> revised text
  std::string synthesis;
  std::string final_text;
  EmbeddingVector embedding;
};

struct Transcript {
  std::uint64_t seed = 0;
  std::string leader;
  std::vector<std::string> scientists;
  std::vector<Event> events;
  std::string final_topic;
  std::vector<IdeaRecord> idea_records;
  std::vector<Ballot> ballots;
  std::string winner;
  std::string final_abstract;

  Event& append(Event event);
  std::size_t count(std::string_view kind) const;
  std::size_t count(std::string_view kind, int round) const;
  std::vector<const Event*> with_kind(std::string_view kind) const;
};

/// Line-delimited records: events first, then ideas, ballots and a summary.
std::string serialize_transcript(const Transcript& transcript);
void save_transcript(const Transcript& transcript, const std::filesystem::path& path);

/// Reads the event records of a transcript or checkpoint file.
std::vector<Event> load_transcript_events(const std::filesystem::path& path);

}  // namespace ideation
