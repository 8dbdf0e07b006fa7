#include "ideation/transcript.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "jsonl.hpp"

namespace ideation {

namespace {

using nlohmann::json;

std::string hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, value);
  return buf;
}

json event_json(const Event& e) {
  json record = {{"record", "event"}, {"seq", e.seq},       {"stage", e.stage},       {"round", e.round},
                 {"kind", e.kind},    {"sender", e.sender}, {"receiver", e.receiver}, {"idea_id", e.idea_id},
                 {"payload", e.payload}, {"llm_call", e.llm_call}};
  if (e.llm_call) record["request_hash"] = hex(e.request_hash);
  if (!e.flag.empty()) record["flag"] = e.flag;
  return record;
}

}  // namespace

Event& Transcript::append(Event event) {
  event.seq = events.size();
  events.push_back(std::move(event));
  return events.back();
}

std::size_t Transcript::count(std::string_view kind) const {
  std::size_t n = 0;
  for (const auto& e : events) n += e.kind == kind;
  return n;
}

std::size_t Transcript::count(std::string_view kind, int round) const {
  std::size_t n = 0;
  for (const auto& e : events) n += e.kind == kind && e.round == round;
  return n;
}

std::vector<const Event*> Transcript::with_kind(std::string_view kind) const {
  std::vector<const Event*> out;
  for (const auto& e : events) {
    if (e.kind == kind) out.push_back(&e);
  }
  return out;
}

std::string serialize_transcript(const Transcript& t) {
  std::ostringstream out;
  for (const auto& e : t.events) out << detail::canonical(event_json(e)) << '\n';
  for (const auto& idea : t.idea_records) {
    json record = {{"record", "idea"},         {"idea_id", idea.idea_id},     {"originator", idea.originator},
                   {"round", idea.round},      {"initial", idea.initial},     {"revisions", idea.revisions},
                   {"synthesis", idea.synthesis}, {"final", idea.final_text}};
    out << detail::canonical(record) << '\n';
  }
  for (const auto& b : t.ballots) {
    json record = {{"record", "ballot"},
                   {"reviewer_id", b.reviewer_id},
                   {"ranking", b.ranking},
                   {"confidences", b.confidences}};
    out << detail::canonical(record) << '\n';
  }
  json summary = {{"record", "summary"},        {"seed", t.seed},
                  {"leader", t.leader},         {"scientists", t.scientists},
                  {"final_topic", t.final_topic}, {"winner", t.winner},
                  {"final_abstract", t.final_abstract}};
  out << detail::canonical(summary) << '\n';
  return out.str();
}

void save_transcript(const Transcript& transcript, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  out << serialize_transcript(transcript);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::vector<Event> load_transcript_events(const std::filesystem::path& path) {
  std::vector<Event> events;
  detail::for_each_record(path, [&](const json& r, std::size_t) {
    if (r.at("record").get<std::string>() != "event") return;
    Event e;
    e.seq = r.at("seq").get<std::uint64_t>();
    e.stage = r.at("stage").get<std::string>();
    e.round = r.at("round").get<int>();
    e.kind = r.at("kind").get<std::string>();
    e.sender = r.at("sender").get<std::string>();
    e.receiver = r.at("receiver").get<std::string>();
    e.idea_id = r.at("idea_id").get<std::string>();
    e.payload = r.at("payload").get<std::string>();
    e.llm_call = r.at("llm_call").get<bool>();
    if (e.llm_call) e.request_hash = std::stoull(r.at("request_hash").get<std::string>(), nullptr, 16);
    if (auto it = r.find("flag"); it != r.end()) e.flag = it->get<std::string>();
    events.push_back(std::move(e));
  });
  return events;
}

}  // namespace ideation
