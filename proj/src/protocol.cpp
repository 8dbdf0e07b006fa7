#include "ideation/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <set>
#include <thread>

namespace ideation {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

std::string join(std::span<const std::string> items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

// Value after "KEY:" on the first line that starts with it.
std::optional<std::string> keyed_line(std::string_view reply, std::string_view key) {
  for (auto line : lines_of(reply)) {
    const std::string t = trim(line);
    if (t.size() > key.size() && t.compare(0, key.size(), key) == 0 && t[key.size()] == ':') {
      return trim(std::string_view(t).substr(key.size() + 1));
    }
  }
  return std::nullopt;
}

std::optional<int> parse_int(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty() || t.size() > 9) return std::nullopt;
  int value = 0;
  for (char c : t) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

std::string idea_id_for(std::size_t scientist_position) {
  return "I" + std::to_string(scientist_position + 2);
}

std::string user_message(const std::string& tag, const std::string& agent, const std::string& body) {
  return tag + " " + agent + "\n" + body;
}

std::string render_ideas(std::span<const IdeaRecord> ideas) {
  std::string out;
  for (std::size_t i = 0; i < ideas.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += "### " + ideas[i].idea_id + "\n" + ideas[i].final_text;
  }
  return out;
}

std::string render_references(std::span<const std::string> ids, const Corpus& corpus) {
  if (ids.empty()) return "(no reference papers)";
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& p = corpus.publication(ids[i]);
    if (i > 0) out += "\n\n";
    out += "### Paper " + std::to_string(i + 1) + " (" + p.id + "): " + p.title + "\n" + p.abstract;
  }
  return out;
}

std::string ballot_format(std::span<const std::string> idea_ids) {
  std::string ranking = "RANKING: " + join(idea_ids, " > ");
  std::string confidence = "CONFIDENCE: ";
  for (std::size_t i = 0; i < idea_ids.size(); ++i) {
    if (i > 0) confidence += ", ";
    confidence += idea_ids[i] + "=7";
  }
  return ranking + "\n" + confidence;
}

}  // namespace

// ------------------------------------------------------------------ config

void RunConfig::validate() const {
  if (team_size < 3) throw Error(ErrorCode::kInvalidConfig, "team_size must be at least 3");
  if (rounds < 1) throw Error(ErrorCode::kInvalidConfig, "rounds must be at least 1");
  if (trials < 1) throw Error(ErrorCode::kInvalidConfig, "trials must be at least 1");
  if (!(diversity_fraction >= 0.0 && diversity_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "diversity_fraction must lie in [0, 1]");
  }
  if (parallelism < 1) throw Error(ErrorCode::kInvalidConfig, "parallelism must be at least 1");
}

Ecosystem::Ecosystem(Corpus corpus, EmbeddingIndex index, int pivot_year,
                     std::optional<std::size_t> baseline_sample, std::uint64_t baseline_seed)
    : corpus_(std::move(corpus)),
      index_(std::move(index)),
      split_(split_by_year(corpus_, pivot_year)),
      sides_(SplitIndex::build(index_, split_)),
      stats_(compute_stats(corpus_, split_, index_, baseline_sample, baseline_seed)),
      smoothed_(smooth(build_matrix(corpus_))),
      profiles_(all_profiles(corpus_, index_)) {}

std::string profile_summary(const Corpus& corpus, const std::string& researcher_id, std::size_t max_titles) {
  const Researcher& r = corpus.researcher(researcher_id);
  std::vector<const Publication*> pubs;
  for (const auto& pid : r.publication_ids) pubs.push_back(&corpus.publication(pid));
  std::sort(pubs.begin(), pubs.end(), [](const Publication* a, const Publication* b) {
    if (a->year != b->year) return a->year > b->year;
    return a->id < b->id;
  });
  std::string out = "Name: " + r.name + "\n";
  out += "Affiliations: " + (r.affiliations.empty() ? std::string("(none)") : join(r.affiliations, "; ")) + "\n";
  out += "Topics: " + (r.topics.empty() ? std::string("(none)") : join(r.topics, "; ")) + "\n";
  out += "Publications: " + std::to_string(pubs.size());
  for (std::size_t i = 0; i < pubs.size() && i < max_titles; ++i) {
    out += "\n- " + pubs[i]->title + " (" + std::to_string(pubs[i]->year) + ")";
  }
  return out;
}

// ----------------------------------------------------------------- session

TrialSession::TrialSession(LlmGateway& gateway, const PromptBundle& prompts, const RunConfig& config,
                           const Corpus& corpus, std::uint64_t seed, std::vector<Event> replay)
    : gateway_(gateway), prompts_(prompts), config_(config), corpus_(corpus), seed_(seed) {
  transcript_.seed = seed;
  for (auto& e : replay) {
    if (e.llm_call) replay_.push_back(std::move(e));
  }
}

const std::string& TrialSession::persona(const std::string& agent) {
  auto it = personas_.find(agent);
  if (it == personas_.end()) {
    const auto summary = profile_summary(corpus_, agent, config_.profile_titles);
    it = personas_.emplace(agent, render(prompts_.persona, {{"agent", agent}, {"profile", summary}})).first;
  }
  return it->second;
}

ChatRequest TrialSession::build_request(const Call& c) {
  ChatRequest request;
  request.system_prompt = persona(c.agent);
  request.messages = c.prior;
  request.messages.push_back({Role::kUser, user_message(c.tag, c.agent, c.body)});
  request.temperature = gateway_.config().temperature;
  request.max_tokens = gateway_.config().max_tokens;
  request.seed = seed_;
  return request;
}

std::vector<std::string> TrialSession::call_batch(std::vector<Call> calls) {
  std::vector<ChatRequest> requests;
  requests.reserve(calls.size());
  for (const auto& c : calls) requests.push_back(build_request(c));

  std::vector<std::string> replies(calls.size());
  std::vector<std::uint64_t> hashes(calls.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < calls.size(); ++i) {
    hashes[i] = request_hash(requests[i]);
    if (replay_cursor_ < replay_.size() && replay_[replay_cursor_].request_hash == hashes[i]) {
      replies[i] = replay_[replay_cursor_++].payload;
      ++replayed_;
    } else {
      replay_cursor_ = replay_.size();
      pending.push_back(i);
    }
  }

  std::vector<std::exception_ptr> failures(calls.size());
  const std::size_t workers = std::min(config_.parallelism, pending.size());
  if (workers <= 1) {
    for (std::size_t i : pending) {
      try {
        replies[i] = gateway_.chat(requests[i]);
      } catch (...) {
        failures[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < pending.size(); k = next++) {
          const std::size_t i = pending[k];
          try {
            replies[i] = gateway_.chat(requests[i]);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Events land in call order; a failure keeps only the calls before it.
  for (std::size_t i = 0; i < calls.size(); ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    Event event = std::move(calls[i].event);
    event.payload = replies[i];
    event.llm_call = true;
    event.request_hash = hashes[i];
    transcript_.append(std::move(event));
  }
  return replies;
}

std::string TrialSession::call(Call c) {
  std::vector<Call> one;
  one.push_back(std::move(c));
  return call_batch(std::move(one)).front();
}

// ----------------------------------------------------------------- parsing

std::optional<std::vector<int>> parse_topic_scores(std::string_view reply, std::size_t count) {
  std::vector<int> scores(count, 0);
  for (auto line : lines_of(reply)) {
    const std::string t = trim(line);
    const auto colon = t.find(':');
    if (colon == std::string::npos) continue;
    const auto index = parse_int(std::string_view(t).substr(0, colon));
    const auto score = parse_int(std::string_view(t).substr(colon + 1));
    if (!index || !score || *index < 1 || static_cast<std::size_t>(*index) > count) continue;
    if (*score < kMinConfidence || *score > kMaxConfidence) return std::nullopt;
    scores[static_cast<std::size_t>(*index) - 1] = *score;
  }
  for (int s : scores) {
    if (s == 0) return std::nullopt;
  }
  return scores;
}

std::size_t select_topic(std::span<const double> mean_scores, Rng& rng) {
  return rng.weighted_index(mean_scores);
}

std::optional<Ballot> parse_ballot(std::string_view reply, const std::string& reviewer_id,
                                   std::span<const std::string> idea_ids) {
  const auto ranking_line = keyed_line(reply, "RANKING");
  const auto confidence_line = keyed_line(reply, "CONFIDENCE");
  if (!ranking_line || !confidence_line) return std::nullopt;
  const std::set<std::string> expected(idea_ids.begin(), idea_ids.end());

  Ballot ballot;
  ballot.reviewer_id = reviewer_id;
  int rank = 0;
  std::string_view rest = *ranking_line;
  while (true) {
    const auto gt = rest.find('>');
    const std::string id = trim(rest.substr(0, gt));
    if (!expected.contains(id) || ballot.ranking.contains(id)) return std::nullopt;
    ballot.ranking[id] = ++rank;
    if (gt == std::string_view::npos) break;
    rest.remove_prefix(gt + 1);
  }
  if (ballot.ranking.size() != expected.size()) return std::nullopt;

  std::string_view conf = *confidence_line;
  while (!conf.empty()) {
    const auto comma = conf.find(',');
    const std::string item = trim(conf.substr(0, comma));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) return std::nullopt;
      const std::string id = trim(std::string_view(item).substr(0, eq));
      const auto value = parse_int(std::string_view(item).substr(eq + 1));
      if (!expected.contains(id) || !value || *value < kMinConfidence || *value > kMaxConfidence) {
        return std::nullopt;
      }
      ballot.confidences[id] = *value;
    }
    if (comma == std::string_view::npos) break;
    conf.remove_prefix(comma + 1);
  }
  if (ballot.confidences.size() != expected.size()) return std::nullopt;
  return ballot;
}

std::optional<std::string> parse_winner(std::string_view reply, std::span<const std::string> idea_ids) {
  const auto line = keyed_line(reply, "WINNER");
  if (!line) return std::nullopt;
  if (std::find(idea_ids.begin(), idea_ids.end(), *line) == idea_ids.end()) return std::nullopt;
  return *line;
}

// ------------------------------------------------------------------ stages

std::string run_topic_discussion(const Team& team, TrialSession& session) {
  const auto roster = team.roster();
  const auto& prompts = session.prompts();
  std::vector<std::string> proposals;
  for (const auto& agent : roster) {
    std::string history;
    if (proposals.empty()) history = "(no proposals yet)";
    for (std::size_t i = 0; i < proposals.size(); ++i) {
      if (i > 0) history += "\n";
      history += std::to_string(i + 1) + ". " + roster[i] + ": " + proposals[i];
    }
    TrialSession::Call c{agent, "TOPIC:", render(prompts.topic_prompt, {{"history", history}}),
                         Event{.stage = std::string(stage::kTopic), .kind = "topic_proposal",
                               .sender = agent, .receiver = "team"},
                         {}};
    proposals.push_back(trim(session.call(std::move(c))));
  }

  std::string listing, format;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    if (i > 0) {
      listing += "\n";
      format += "\n";
    }
    listing += std::to_string(i + 1) + ". " + proposals[i];
    format += std::to_string(i + 1) + ": 5";
  }
  const std::string body = render(prompts.topic_score_prompt, {{"proposals", listing}, {"format", format}});

  std::vector<TrialSession::Call> calls;
  for (const auto& agent : roster) {
    calls.push_back({agent, "TOPIC_SCORE:", body,
                     Event{.stage = std::string(stage::kTopic), .kind = "topic_score", .sender = agent,
                           .receiver = "team"},
                     {}});
  }
  const auto replies = session.call_batch(calls);

  std::vector<std::vector<int>> scores(roster.size());
  std::vector<TrialSession::Call> retries;
  std::vector<std::size_t> retry_agents;
  for (std::size_t a = 0; a < roster.size(); ++a) {
    if (auto parsed = parse_topic_scores(replies[a], proposals.size())) {
      scores[a] = *parsed;
      continue;
    }
    retry_agents.push_back(a);
    retries.push_back({roster[a], "TOPIC_SCORE:", render(prompts.reprompt, {{"format", format}}),
                       Event{.stage = std::string(stage::kTopic), .kind = "topic_score_retry",
                             .sender = roster[a], .receiver = "team"},
                       {{Role::kUser, user_message("TOPIC_SCORE:", roster[a], body)},
                        {Role::kAssistant, replies[a]}}});
  }
  if (!retries.empty()) {
    const std::size_t first_event = session.transcript().events.size();
    const auto retry_replies = session.call_batch(retries);
    for (std::size_t r = 0; r < retries.size(); ++r) {
      const std::size_t a = retry_agents[r];
      if (auto parsed = parse_topic_scores(retry_replies[r], proposals.size())) {
        scores[a] = *parsed;
      } else {
        scores[a].assign(proposals.size(), 5);
        session.transcript().events[first_event + r].flag = "unparsable scores; defaulted to 5";
      }
    }
  }

  std::vector<double> means(proposals.size(), 0.0);
  for (std::size_t p = 0; p < proposals.size(); ++p) {
    for (const auto& agent_scores : scores) means[p] += agent_scores[p];
    means[p] /= static_cast<double>(roster.size());
  }
  Rng rng(derive_seed(session.seed(), "topic-selection"));
  const std::size_t chosen = select_topic(means, rng);
  std::string means_text;
  for (std::size_t p = 0; p < means.size(); ++p) {
    if (p > 0) means_text += ", ";
    means_text += std::to_string(p + 1) + "=" + fixed(means[p], 4);
  }
  session.transcript().append(Event{.stage = std::string(stage::kTopic), .kind = "topic_selected",
                                    .sender = roster[chosen], .receiver = "team",
                                    .payload = proposals[chosen] + "\n[mean scores: " + means_text + "]"});
  session.transcript().final_topic = proposals[chosen];
  return proposals[chosen];
}

std::string augment_prompt(std::string_view base_prompt, std::string_view idea_text,
                           const EmbeddingIndex& index, const Corpus& corpus, std::size_t k,
                           LlmGateway& gateway) {
  std::string out(base_prompt);
  if (k == 0 || index.empty()) return out;
  const auto query = gateway.embed(idea_text, index.dim());
  const auto nearest = index.top_k(query, k);
  std::vector<std::string> ids;
  for (const auto& n : nearest) ids.push_back(n.id);
  out += "\n[[REFERENCES]]\n" + render_references(ids, corpus) + "\n[[/REFERENCES]]";
  return out;
}

std::vector<IdeaRecord> run_idea_generation(const Team& team, const std::string& topic,
                                            const Ecosystem& ecosystem, TrialSession& session) {
  const auto& prompts = session.prompts();
  const auto& config = session.config();
  const auto& scientists = team.scientists;
  const std::string idea_stage(stage::kIdea);
  std::vector<std::string> previous(scientists.size());
  std::vector<IdeaRecord> records;

  for (int round = 1; round <= config.rounds; ++round) {
    records.assign(scientists.size(), IdeaRecord{});
    std::vector<TrialSession::Call> generation;
    for (std::size_t i = 0; i < scientists.size(); ++i) {
      records[i].idea_id = idea_id_for(i);
      records[i].originator = scientists[i];
      records[i].round = round;
      const std::string base =
          render(prompts.generation_prompt, {{"topic", topic}, {"previous_idea", previous[i]}});
      const std::string& query = round == 1 ? topic : previous[i];
      generation.push_back({scientists[i], "IDEA:",
                            augment_prompt(base, query, ecosystem.index(), ecosystem.corpus(), config.top_k,
                                           session.gateway()),
                            Event{.stage = idea_stage, .round = round, .kind = "idea", .sender = scientists[i],
                                  .receiver = "team", .idea_id = records[i].idea_id},
                            {}});
    }
    const auto initial = session.call_batch(std::move(generation));
    for (std::size_t i = 0; i < scientists.size(); ++i) records[i].initial = initial[i];

    if (config.enable_discussion) {
      std::vector<TrialSession::Call> revisions;
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i = 0; i < scientists.size(); ++i) {
        for (std::size_t j = 0; j < scientists.size(); ++j) {
          if (j == i) continue;
          pairs.emplace_back(i, j);
          revisions.push_back({scientists[j], "REVISE:", render(prompts.revision_prompt, {{"idea", initial[i]}}),
                               Event{.stage = idea_stage, .round = round, .kind = "revision",
                                     .sender = scientists[j], .receiver = team.leader,
                                     .idea_id = records[i].idea_id},
                               {}});
        }
      }
      const auto revised = session.call_batch(std::move(revisions));
      for (std::size_t r = 0; r < pairs.size(); ++r) {
        records[pairs[r].first].revisions[scientists[pairs[r].second]] = revised[r];
      }

      std::vector<TrialSession::Call> syntheses;
      for (std::size_t i = 0; i < scientists.size(); ++i) {
        std::string joined;
        for (std::size_t r = 0; r < pairs.size(); ++r) {
          if (pairs[r].first != i) continue;
          if (!joined.empty()) joined += "\n\n";
          joined += "--- revision by " + scientists[pairs[r].second] + " ---\n" + revised[r];
        }
        syntheses.push_back({team.leader, "SYNTH:",
                             render(prompts.synthesis_prompt, {{"idea", initial[i]}, {"revisions", joined}}),
                             Event{.stage = idea_stage, .round = round, .kind = "synthesis", .sender = team.leader,
                                   .receiver = scientists[i], .idea_id = records[i].idea_id},
                             {}});
      }
      const auto synthesized = session.call_batch(std::move(syntheses));

      std::vector<TrialSession::Call> reflections;
      for (std::size_t i = 0; i < scientists.size(); ++i) {
        records[i].synthesis = synthesized[i];
        reflections.push_back({scientists[i], "REFLECT:",
                               render(prompts.reflection_prompt, {{"idea", initial[i]}, {"synthesis", synthesized[i]}}),
                               Event{.stage = idea_stage, .round = round, .kind = "reflection",
                                     .sender = scientists[i], .receiver = "team", .idea_id = records[i].idea_id},
                               {}});
      }
      const auto reflected = session.call_batch(std::move(reflections));
      for (std::size_t i = 0; i < scientists.size(); ++i) records[i].final_text = reflected[i];
    } else {
      for (auto& record : records) record.final_text = record.initial;
    }
    for (std::size_t i = 0; i < scientists.size(); ++i) previous[i] = records[i].final_text;
  }

  for (auto& record : records) {
    record.embedding = session.gateway().embed(record.final_text, ecosystem.index().dim());
  }
  return records;
}

std::vector<std::string> pooled_references(std::span<const IdeaRecord> ideas, const EmbeddingIndex& index,
                                           std::size_t k) {
  if (k == 0 || index.empty()) return {};
  std::map<std::string, double> best;
  for (const auto& idea : ideas) {
    for (const auto& n : index.top_k(idea.embedding, k)) {
      auto [it, inserted] = best.emplace(n.id, n.distance);
      if (!inserted) it->second = std::min(it->second, n.distance);
    }
  }
  std::vector<Neighbor> pool;
  for (const auto& [id, d] : best) pool.push_back({id, d});
  std::sort(pool.begin(), pool.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  std::vector<std::string> ids;
  for (const auto& n : pool) ids.push_back(n.id);
  return ids;
}

NoveltyOutcome run_check_novelty(const Team& team, const std::vector<IdeaRecord>& ideas,
                                 const Ecosystem& ecosystem, TrialSession& session) {
  if (ideas.empty()) throw Error(ErrorCode::kEmptyIdSet, "no ideas to review");
  const auto& prompts = session.prompts();
  const auto& config = session.config();
  const std::string novelty_stage(stage::kNovelty);
  NoveltyOutcome outcome;
  std::vector<std::string> ids;
  for (const auto& idea : ideas) ids.push_back(idea.idea_id);

  const auto finish = [&](const std::string& winner) {
    outcome.result.winner = winner;
    for (const auto& idea : ideas) {
      if (idea.idea_id == winner) outcome.winner = idea;
    }
    session.transcript().winner = winner;
    return outcome;
  };

  if (ideas.size() == 1) {
    outcome.result.scores[ids.front()] = 0.0;
    return finish(ids.front());
  }

  outcome.reference_pool = pooled_references(ideas, ecosystem.index(), config.top_k);
  session.transcript().append(Event{.stage = novelty_stage, .kind = "reference_pool", .sender = "system",
                                    .receiver = "team", .payload = join(outcome.reference_pool, ",")});
  const std::string ideas_text = render_ideas(ideas);

  if (!config.enable_vote) {
    const std::string format = "WINNER: " + ids.front();
    const std::string body = render(prompts.judge_prompt,
                                    {{"ideas", ideas_text},
                                     {"references", render_references(outcome.reference_pool, ecosystem.corpus())},
                                     {"format", format}});
    const std::string reply = session.call({team.leader, "JUDGE:", body,
                                            Event{.stage = novelty_stage, .kind = "judgment",
                                                  .sender = team.leader, .receiver = "team"},
                                            {}});
    if (auto winner = parse_winner(reply, ids)) return finish(*winner);
    const std::string retry = session.call(
        {team.leader, "JUDGE:", render(prompts.reprompt, {{"format", format}}),
         Event{.stage = novelty_stage, .kind = "judgment_retry", .sender = team.leader, .receiver = "team"},
         {{Role::kUser, user_message("JUDGE:", team.leader, body)}, {Role::kAssistant, reply}}});
    if (auto winner = parse_winner(retry, ids)) return finish(*winner);
    session.transcript().events.back().flag = "unparsable judgment; defaulted to " + ids.front();
    return finish(ids.front());
  }

  if (config.reviewer_pool == ReviewerPool::kInternal) {
    outcome.reviewers = team.roster();
  } else {
    Rng rng(derive_seed(session.seed(), "external-reviewers"));
    const Team external = sample_team(ecosystem.smoothed_matrix(), ecosystem.profiles(),
                                      {.size = team.size(), .diversity_fraction = 0.0, .excluded = team.roster()},
                                      rng);
    outcome.reviewers = external.roster();
  }
  session.transcript().append(Event{.stage = novelty_stage, .kind = "reviewers", .sender = "system",
                                    .receiver = "team", .payload = join(outcome.reviewers, ",")});

  outcome.shares = partition_references(outcome.reference_pool, outcome.reviewers);
  const std::string format = ballot_format(ids);
  std::vector<TrialSession::Call> calls;
  std::vector<std::string> bodies;
  for (const auto& reviewer : outcome.reviewers) {
    const auto& share = outcome.shares.at(reviewer);
    session.transcript().append(Event{.stage = novelty_stage, .kind = "reference_share", .sender = "system",
                                      .receiver = reviewer, .payload = join(share, ",")});
    bodies.push_back(render(prompts.review_prompt, {{"ideas", ideas_text},
                                                    {"references", render_references(share, ecosystem.corpus())},
                                                    {"format", format}}));
    calls.push_back({reviewer, "RANK:", bodies.back(),
                     Event{.stage = novelty_stage, .kind = "ballot", .sender = reviewer, .receiver = team.leader},
                     {}});
  }
  const auto replies = session.call_batch(std::move(calls));

  std::vector<std::optional<Ballot>> parsed(outcome.reviewers.size());
  std::vector<TrialSession::Call> retries;
  std::vector<std::size_t> retry_index;
  for (std::size_t r = 0; r < outcome.reviewers.size(); ++r) {
    parsed[r] = parse_ballot(replies[r], outcome.reviewers[r], ids);
    if (parsed[r]) continue;
    retry_index.push_back(r);
    retries.push_back({outcome.reviewers[r], "RANK:", render(prompts.reprompt, {{"format", format}}),
                       Event{.stage = novelty_stage, .kind = "ballot_retry", .sender = outcome.reviewers[r],
                             .receiver = team.leader},
                       {{Role::kUser, user_message("RANK:", outcome.reviewers[r], bodies[r])},
                        {Role::kAssistant, replies[r]}}});
  }
  if (!retries.empty()) {
    const std::size_t first_event = session.transcript().events.size();
    const auto retry_replies = session.call_batch(std::move(retries));
    for (std::size_t k = 0; k < retry_index.size(); ++k) {
      const std::size_t r = retry_index[k];
      parsed[r] = parse_ballot(retry_replies[k], outcome.reviewers[r], ids);
      if (!parsed[r]) session.transcript().events[first_event + k].flag = "unparsable ballot; dropped";
    }
  }

  std::vector<Ballot> ballots;
  for (auto& b : parsed) {
    if (b) ballots.push_back(std::move(*b));
  }
  if (ballots.empty()) throw Error(ErrorCode::kAllBallotsDropped, "no reviewer produced a parsable ballot");
  session.transcript().ballots = ballots;
  outcome.result = borda_scores(ballots, ids.size());

  std::string scores_text;
  for (const auto& [id, score] : outcome.result.scores) {
    if (!scores_text.empty()) scores_text += ", ";
    scores_text += id + "=" + fixed(score, 4);
  }
  session.transcript().append(Event{.stage = novelty_stage, .kind = "vote_result", .sender = "system",
                                    .receiver = "team", .idea_id = outcome.result.winner,
                                    .payload = scores_text});
  const BordaResult result = outcome.result;
  auto done = finish(result.winner);
  done.result = result;
  return done;
}

std::string run_abstract_generation(const Team& team, const IdeaRecord& winner, TrialSession& session) {
  const auto& prompts = session.prompts();
  const std::string abstract_stage(stage::kAbstract);
  std::string current = session.call({winner.originator, "DRAFT:",
                                      render(prompts.abstract_prompt, {{"idea", winner.final_text}}),
                                      Event{.stage = abstract_stage, .kind = "draft", .sender = winner.originator,
                                            .receiver = "team", .idea_id = winner.idea_id},
                                      {}});
  for (const auto& agent : team.roster()) {
    if (agent == winner.originator) continue;
    current = session.call({agent, "REFINE:", render(prompts.refine_prompt, {{"abstract", current}}),
                            Event{.stage = abstract_stage, .kind = "refinement", .sender = agent,
                                  .receiver = "team", .idea_id = winner.idea_id},
                            {}});
  }
  session.transcript().final_abstract = current;
  return current;
}

TrialResult run_trial(const Ecosystem& ecosystem, const RunConfig& config, LlmGateway& gateway,
                      const PromptBundle& prompts, const TrialOptions& options) {
  config.validate();
  prompts.validate();
  TrialSession session(gateway, prompts, config, ecosystem.corpus(), config.seed, options.resume_events);
  try {
    Rng team_rng(derive_seed(config.seed, "team"));
    const Team team = sample_team(ecosystem.smoothed_matrix(), ecosystem.profiles(),
                                  {.size = config.team_size, .diversity_fraction = config.diversity_fraction},
                                  team_rng);
    auto& transcript = session.transcript();
    transcript.leader = team.leader;
    transcript.scientists = team.scientists;
    transcript.append(Event{.stage = std::string(stage::kTeam), .kind = "team", .sender = "system",
                            .receiver = "team",
                            .payload = "leader=" + team.leader + "; scientists=" + join(team.scientists, ",") +
                                       "; diversity=" + fixed(team_diversity(team), 6)});

    const std::string topic = run_topic_discussion(team, session);
    auto ideas = run_idea_generation(team, topic, ecosystem, session);
    transcript.idea_records = ideas;
    const auto novelty = run_check_novelty(team, ideas, ecosystem, session);
    const std::string abstract = run_abstract_generation(team, novelty.winner, session);

    TrialResult result;
    result.abstract_embedding = gateway.embed(abstract, ecosystem.index().dim());
    result.metrics = evaluate_abstract(result.abstract_embedding, ecosystem.sides(), ecosystem.corpus(),
                                       ecosystem.stats());
    result.transcript = std::move(session.transcript());
    return result;
  } catch (const Error& e) {
    if (!options.checkpoint_path.empty()) save_transcript(session.transcript(), options.checkpoint_path);
    throw TrialAborted(e.what(), session.transcript());
  }
}

}  // namespace ideation
