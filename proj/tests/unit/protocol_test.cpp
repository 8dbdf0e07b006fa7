#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "ideation/error.hpp"
#include "ideation/protocol.hpp"
#include "ideation/transcript.hpp"
#include "oracles.hpp"

using namespace ideation;
using fixture::thrown_code;

namespace {

RunConfig config(std::size_t n, int rounds, std::uint64_t seed = 1) {
  RunConfig c;
  c.team_size = n;
  c.rounds = rounds;
  c.seed = seed;
  c.trials = 1;
  return c;
}

/// Shared toy ecosystem; building it embeds 200 abstracts and computes the
/// baseline, so do it once.
class ProtocolTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    gateway_ = fixture::scripted();
    ecosystem_ = new Ecosystem(fixture::toy_ecosystem(*gateway_));
  }
  static void TearDownTestSuite() {
    delete ecosystem_;
    ecosystem_ = nullptr;
    gateway_.reset();
  }

  TrialResult run(const RunConfig& c, Script script = default_script()) {
    auto gw = fixture::scripted(std::move(script));
    return run_trial(*ecosystem_, c, *gw, default_prompts());
  }

  Team some_team(std::size_t n) {
    return sample_team(ecosystem_->smoothed_matrix(), ecosystem_->profiles(), {.size = n}, 3);
  }

  static std::shared_ptr<LlmGateway> gateway_;
  static Ecosystem* ecosystem_;
};

std::shared_ptr<LlmGateway> ProtocolTest::gateway_;
Ecosystem* ProtocolTest::ecosystem_ = nullptr;

/// Delegates to the scripted backend and fails permanently after `limit`
/// completions.
class FailingBackend : public ChatBackend {
 public:
  FailingBackend(std::size_t limit, std::size_t dim) : inner_(default_script(), dim, 0), limit_(limit) {}
  std::string complete(const ChatRequest& r) override {
    if (calls_++ >= limit_) throw Error(ErrorCode::kInvalidRequest, "backend gone");
    return inner_.complete(r);
  }
  std::vector<double> embed(std::string_view text) override { return inner_.embed(text); }
  std::size_t calls() const { return calls_; }

 private:
  ScriptedBackend inner_;
  std::size_t limit_;
  std::atomic<std::size_t> calls_{0};
};

BackendConfig scripted_backend_config() {
  BackendConfig c;
  c.kind = BackendKind::kScripted;
  c.embed_dim = 16;
  return c;
}

}  // namespace

TEST_F(ProtocolTest, EventCountLaw) {
  for (std::size_t n : {3u, 4u, 8u}) {
    for (int rounds : {1, 5}) {
      const auto r = run(config(n, rounds));
      const auto& t = r.transcript;
      for (int round = 1; round <= rounds; ++round) {
        EXPECT_EQ(t.count("idea", round), n - 1) << n << "/" << round;
        EXPECT_EQ(t.count("revision", round), (n - 1) * (n - 2));
        EXPECT_EQ(t.count("synthesis", round), n - 1);
        EXPECT_EQ(t.count("reflection", round), n - 1);
      }
      EXPECT_EQ(t.count("idea"), (n - 1) * rounds);
      EXPECT_EQ(t.count("topic_proposal"), n);
      EXPECT_EQ(t.count("topic_score"), n);
      EXPECT_EQ(t.count("draft"), 1u);
      EXPECT_EQ(t.count("refinement"), n - 1);
      EXPECT_EQ(t.count("ballot"), n);
    }
  }
}

TEST_F(ProtocolTest, NoDiscussionKeepsInitialIdeas) {
  auto c = config(4, 3);
  c.enable_discussion = false;
  const auto r = run(c);
  const auto& t = r.transcript;
  EXPECT_EQ(t.count("revision"), 0u);
  EXPECT_EQ(t.count("synthesis"), 0u);
  EXPECT_EQ(t.count("reflection"), 0u);
  EXPECT_EQ(t.count("idea"), 9u);
  ASSERT_EQ(t.idea_records.size(), 3u);
  for (const auto& idea : t.idea_records) {
    EXPECT_EQ(idea.final_text, idea.initial);
    EXPECT_TRUE(idea.revisions.empty());
  }
}

TEST_F(ProtocolTest, DiscussionAblationOnlyRemovesExchangeEvents) {
  auto with = config(4, 1, 9);
  auto without = with;
  without.enable_discussion = false;
  const auto a = run(with).transcript;
  const auto b = run(without).transcript;
  const std::set<std::string> exchange{"revision", "synthesis", "reflection"};
  std::multiset<std::string> kinds_a, kinds_b;
  for (const auto& e : a.events)
    if (!exchange.contains(e.kind)) kinds_a.insert(e.kind);
  for (const auto& e : b.events) kinds_b.insert(e.kind);
  EXPECT_EQ(kinds_a, kinds_b);
  EXPECT_EQ(a.leader, b.leader);
  EXPECT_EQ(a.final_topic, b.final_topic);
}

TEST_F(ProtocolTest, RevisionAndSynthesisRoles) {
  const auto r = run(config(5, 2));
  const auto& t = r.transcript;
  for (const auto* e : t.with_kind("revision")) {
    EXPECT_NE(e->sender, t.leader);
    EXPECT_EQ(e->receiver, t.leader);
  }
  for (const auto* e : t.with_kind("synthesis")) {
    EXPECT_EQ(e->sender, t.leader);
    EXPECT_NE(e->receiver, t.leader);
  }
  for (const auto* e : t.with_kind("idea")) EXPECT_NE(e->sender, t.leader);
}

TEST_F(ProtocolTest, SynthesisSeesExactlyTheOtherScientistsRevisions) {
  const auto r = run(config(5, 1));
  const auto& t = r.transcript;
  const auto syntheses = t.with_kind("synthesis");
  ASSERT_EQ(syntheses.size(), 4u);
  for (const auto* e : syntheses) {
    const std::string& originator = e->receiver;
    for (const auto& s : t.scientists) {
      const bool present = e->payload.find("--- revision by " + s + " ---") != std::string::npos;
      EXPECT_EQ(present, s != originator) << s << " in synthesis for " << originator;
    }
    EXPECT_EQ(e->payload.find("--- revision by " + t.leader + " ---"), std::string::npos);
  }
  for (const auto& idea : t.idea_records) {
    EXPECT_EQ(idea.revisions.size(), 3u);
    EXPECT_FALSE(idea.revisions.contains(idea.originator));
  }
}

TEST_F(ProtocolTest, IdenticalProposalsSelectThatTopic) {
  auto script = default_script();
  script.set("TOPIC:", "Shared topic");
  const auto r = run(config(4, 1), script);
  EXPECT_EQ(r.transcript.final_topic, "Shared topic");
  EXPECT_EQ(r.transcript.count("topic_selected"), 1u);
}

TEST_F(ProtocolTest, UnparsableScoresDefaultAfterOneRetry) {
  auto script = default_script();
  script.set("TOPIC_SCORE:", "I like all of them.");
  const auto r = run(config(4, 1), script);
  const auto retries = r.transcript.with_kind("topic_score_retry");
  ASSERT_EQ(retries.size(), 4u);
  for (const auto* e : retries) EXPECT_EQ(e->flag, "unparsable scores; defaulted to 5");
  const auto selected = r.transcript.with_kind("topic_selected");
  ASSERT_EQ(selected.size(), 1u);
  EXPECT_NE(selected.front()->payload.find("1=5.0000, 2=5.0000, 3=5.0000, 4=5.0000"), std::string::npos);
}

TEST(SelectTopic, ProportionalToMeanScores) {
  const std::vector<double> means{2.0, 1.0};
  Rng rng(5);
  const int draws = 30000;
  int first = 0;
  for (int i = 0; i < draws; ++i) first += select_topic(means, rng) == 0;
  const double p = 2.0 / 3.0;
  EXPECT_LE(std::abs(first - draws * p), 3 * std::sqrt(draws * p * (1 - p)));
}

TEST(AugmentPrompt, ZeroKLeavesPromptUnchanged) {
  const auto m = fixture::metric_corpus();
  auto gw = fixture::scripted(default_script(), 2);
  EXPECT_EQ(augment_prompt("base prompt", "idea", m.index, m.corpus, 0, *gw), "base prompt");
}

TEST(AugmentPrompt, AppendsNearestPapersInOrder) {
  const Corpus corpus({fixture::pub("a", 2001, 0, {"r"}), fixture::pub("b", 2002, 0, {"r"}),
                       fixture::pub("c", 2003, 0, {"r"})},
                      {fixture::researcher("r", {"a", "b", "c"})});
  std::map<std::string, oracle::Vec> points{{"a", {0.9, 0.9}}, {"b", {-0.5, 0.1}}, {"c", {0.2, -0.7}}};
  EmbeddingIndex idx(2);
  for (const auto& [id, v] : points) idx.add(id, EmbeddingVector(v));
  auto gw = fixture::scripted(default_script(), 2);
  const auto query = gw->embed("idea text", 2);
  const auto expected = oracle::knn(points, {query.values().begin(), query.values().end()}, 8);
  ASSERT_EQ(expected.size(), 3u);

  const auto out = augment_prompt("base", "idea text", idx, corpus, 8, *gw);
  EXPECT_EQ(out.rfind("base\n[[REFERENCES]]\n", 0), 0u);
  std::size_t last = 0, blocks = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto pos = out.find("### Paper " + std::to_string(i + 1) + " (" + expected[i].first + "): Title of " +
                              expected[i].first + "\nAbstract of " + expected[i].first);
    ASSERT_NE(pos, std::string::npos) << expected[i].first;
    EXPECT_GT(pos, last);
    last = pos;
    ++blocks;
  }
  EXPECT_EQ(blocks, 3u);
  EXPECT_EQ(out.find("### Paper 4"), std::string::npos);
  EXPECT_TRUE(out.ends_with("[[/REFERENCES]]"));
}

TEST_F(ProtocolTest, SingleIdeaWinsWithoutReview) {
  auto gw = fixture::scripted();
  const auto prompts = default_prompts();
  const auto c = config(3, 1);
  TrialSession session(*gw, prompts, c, ecosystem_->corpus(), 1);
  IdeaRecord idea;
  idea.idea_id = "I2";
  idea.final_text = "only";
  const auto out = run_check_novelty(some_team(3), {idea}, *ecosystem_, session);
  EXPECT_EQ(out.winner.idea_id, "I2");
  EXPECT_TRUE(session.transcript().events.empty());
}

TEST_F(ProtocolTest, ReferencesArePooledAndDealtEvenly) {
  const auto r = run(config(4, 1));
  const auto& t = r.transcript;
  const auto pool_events = t.with_kind("reference_pool");
  ASSERT_EQ(pool_events.size(), 1u);
  std::vector<std::string> pool;
  {
    std::string_view rest = pool_events.front()->payload;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      pool.emplace_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  EXPECT_EQ(pool, pooled_references(t.idea_records, ecosystem_->index(), 8));
  EXPECT_GE(pool.size(), 8u);
  EXPECT_LE(pool.size(), 24u);
  const auto shares = t.with_kind("reference_share");
  ASSERT_EQ(shares.size(), 4u);
  std::multiset<std::string> dealt;
  std::size_t lo = 100, hi = 0;
  for (const auto* e : shares) {
    std::size_t size = 0;
    std::string_view rest = e->payload;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      dealt.emplace(rest.substr(0, comma));
      ++size;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    lo = std::min(lo, size);
    hi = std::max(hi, size);
  }
  EXPECT_EQ(dealt, std::multiset<std::string>(pool.begin(), pool.end()));
  EXPECT_LE(hi - lo, 1u);
}

TEST_F(ProtocolTest, PooledReferencesDeduplicateByMinimumDistance) {
  IdeaRecord a, b;
  a.embedding = ecosystem_->index().at(ecosystem_->index().ids()[0]);
  b.embedding = a.embedding;
  const std::vector<IdeaRecord> ideas{a, b};
  const auto pool = pooled_references(ideas, ecosystem_->index(), 8);
  EXPECT_EQ(pool.size(), 8u);
  EXPECT_EQ(pool.front(), ecosystem_->index().ids()[0]);
  EXPECT_TRUE(pooled_references(ideas, ecosystem_->index(), 0).empty());
}

TEST_F(ProtocolTest, InternalReviewersAreTheTeam) {
  const auto r = run(config(4, 1));
  const auto& t = r.transcript;
  std::set<std::string> senders;
  for (const auto* e : t.with_kind("ballot")) senders.insert(e->sender);
  std::set<std::string> team(t.scientists.begin(), t.scientists.end());
  team.insert(t.leader);
  EXPECT_EQ(senders, team);
  EXPECT_EQ(t.ballots.size(), 4u);
}

TEST_F(ProtocolTest, ExternalReviewersAreDisjointFromTeam) {
  auto c = config(4, 1);
  c.reviewer_pool = ReviewerPool::kExternal;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    c.seed = seed;
    const auto t = run(c).transcript;
    const auto ballots = t.with_kind("ballot");
    ASSERT_EQ(ballots.size(), 4u);
    for (const auto* e : ballots) {
      EXPECT_NE(e->sender, t.leader);
      EXPECT_EQ(std::count(t.scientists.begin(), t.scientists.end(), e->sender), 0);
    }
  }
}

TEST_F(ProtocolTest, ExternalReviewPoolTooSmall) {
  auto c = config(8, 1);
  c.reviewer_pool = ReviewerPool::kExternal;
  // 12 researchers cannot supply 8 reviewers outside an 8-person team.
  EXPECT_EQ(thrown_code([&] { run(c); }), ErrorCode::kTrialAborted);
}

TEST_F(ProtocolTest, UnparsableBallotIsRetriedThenDropped) {
  const Team team = some_team(4);
  auto script = default_script();
  script.set("RANK: " + team.scientists[0], "No opinion.");
  auto gw = fixture::scripted(script);
  const auto prompts = default_prompts();
  const auto c = config(4, 1);
  TrialSession session(*gw, prompts, c, ecosystem_->corpus(), 1);
  std::vector<IdeaRecord> ideas(3);
  for (std::size_t i = 0; i < 3; ++i) {
    ideas[i].idea_id = "I" + std::to_string(i + 2);
    ideas[i].originator = team.scientists[i];
    ideas[i].final_text = "idea " + std::to_string(i);
    ideas[i].embedding = gw->embed(ideas[i].final_text, 16);
  }
  const auto out = run_check_novelty(team, ideas, *ecosystem_, session);
  const auto retries = session.transcript().with_kind("ballot_retry");
  ASSERT_EQ(retries.size(), 1u);
  EXPECT_EQ(retries.front()->sender, team.scientists[0]);
  EXPECT_EQ(retries.front()->flag, "unparsable ballot; dropped");
  EXPECT_EQ(out.result.m, 3u);
  EXPECT_EQ(session.transcript().ballots.size(), 3u);
}

TEST_F(ProtocolTest, AllBallotsDroppedAborts) {
  auto script = default_script();
  script.set("RANK:", "No opinion.");
  EXPECT_EQ(thrown_code([&] { run(config(4, 1), script); }), ErrorCode::kTrialAborted);
  try {
    run(config(4, 1), script);
  } catch (const TrialAborted& e) {
    EXPECT_NE(std::string(e.what()).find("all ballots dropped"), std::string::npos) << e.what();
    EXPECT_EQ(e.partial().count("ballot_retry"), 4u);
  }
}

TEST_F(ProtocolTest, WeightedVoteDecidesWinner) {
  const Team team = some_team(4);
  auto script = default_script();
  // Two reviewers prefer I3 strongly, two prefer I2 weakly.
  script.set("RANK: " + team.roster()[0], "RANKING: I3 > I2 > I4\nCONFIDENCE: I2=10, I3=10, I4=10");
  script.set("RANK: " + team.roster()[1], "RANKING: I3 > I2 > I4\nCONFIDENCE: I2=10, I3=10, I4=10");
  script.set("RANK: " + team.roster()[2], "RANKING: I2 > I4 > I3\nCONFIDENCE: I2=2, I3=2, I4=2");
  script.set("RANK: " + team.roster()[3], "RANKING: I2 > I4 > I3\nCONFIDENCE: I2=2, I3=2, I4=2");
  auto gw = fixture::scripted(script);
  const auto prompts = default_prompts();
  const auto c = config(4, 1);
  TrialSession session(*gw, prompts, c, ecosystem_->corpus(), 1);
  std::vector<IdeaRecord> ideas(3);
  for (std::size_t i = 0; i < 3; ++i) {
    ideas[i].idea_id = "I" + std::to_string(i + 2);
    ideas[i].originator = team.scientists[i];
    ideas[i].final_text = "idea " + std::to_string(i);
    ideas[i].embedding = gw->embed(ideas[i].final_text, 16);
  }
  const auto out = run_check_novelty(team, ideas, *ecosystem_, session);
  // I3: 2 + 2 + 0 + 0 = 4; I2: 1 + 1 + 0.4 + 0.4 = 2.8; I4: 0.2 + 0.2 = 0.4
  EXPECT_EQ(out.result.winner, "I3");
  EXPECT_DOUBLE_EQ(out.result.scores.at("I3"), 4.0);
  EXPECT_DOUBLE_EQ(out.result.scores.at("I2"), 2.8);
  EXPECT_EQ(out.winner.originator, team.scientists[1]);
  EXPECT_EQ(session.transcript().winner, "I3");
  const auto result = session.transcript().with_kind("vote_result");
  ASSERT_EQ(result.size(), 1u);
  EXPECT_EQ(result.front()->idea_id, "I3");
}

TEST_F(ProtocolTest, LeaderJudgesWhenVotingDisabled) {
  auto script = default_script();
  script.set("JUDGE:", "WINNER: I3");
  auto c = config(4, 1);
  c.enable_vote = false;
  const auto t = run(c, script).transcript;
  EXPECT_EQ(t.count("ballot"), 0u);
  EXPECT_EQ(t.count("judgment"), 1u);
  EXPECT_EQ(t.winner, "I3");
  EXPECT_EQ(t.with_kind("judgment").front()->sender, t.leader);

  script.set("JUDGE:", "Hard to say.");
  const auto fallback = run(c, script).transcript;
  ASSERT_EQ(fallback.count("judgment_retry"), 1u);
  EXPECT_EQ(fallback.winner, "I2");
  EXPECT_EQ(fallback.with_kind("judgment_retry").front()->flag, "unparsable judgment; defaulted to I2");
}

TEST_F(ProtocolTest, AbstractIsDraftedThenRefinedInRosterOrder) {
  const auto t = run(config(4, 1)).transcript;
  const auto drafts = t.with_kind("draft");
  const auto refinements = t.with_kind("refinement");
  ASSERT_EQ(drafts.size(), 1u);
  ASSERT_EQ(refinements.size(), 3u);
  std::string originator;
  for (const auto& idea : t.idea_records)
    if (idea.idea_id == t.winner) originator = idea.originator;
  EXPECT_EQ(drafts.front()->sender, originator);
  std::vector<std::string> expected;
  std::vector<std::string> roster{t.leader};
  roster.insert(roster.end(), t.scientists.begin(), t.scientists.end());
  for (const auto& a : roster)
    if (a != originator) expected.push_back(a);
  std::string tail;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(refinements[i]->sender, expected[i]);
    tail += "\n(refined by " + expected[i] + ")";
  }
  EXPECT_TRUE(t.final_abstract.ends_with(tail)) << t.final_abstract;
}

TEST_F(ProtocolTest, IdentityRefinementKeepsDraft) {
  auto script = default_script();
  script.set("REFINE:", "{section:ABSTRACT}");
  const auto t = run(config(4, 1), script).transcript;
  EXPECT_EQ(t.final_abstract, t.with_kind("draft").front()->payload);
}

TEST_F(ProtocolTest, SameSeedSameTranscript) {
  const auto a = run(config(4, 2, 77));
  const auto b = run(config(4, 2, 77));
  EXPECT_EQ(serialize_transcript(a.transcript), serialize_transcript(b.transcript));
  EXPECT_EQ(a.metrics.hd_raw, b.metrics.hd_raw);
  const auto c = run(config(4, 2, 78));
  EXPECT_NE(serialize_transcript(a.transcript), serialize_transcript(c.transcript));
}

TEST_F(ProtocolTest, ParallelCallsMatchSequential) {
  auto seq = config(5, 2, 12);
  auto par = seq;
  par.parallelism = 4;
  EXPECT_EQ(serialize_transcript(run(seq).transcript), serialize_transcript(run(par).transcript));
}

TEST_F(ProtocolTest, EventsCarryLogicalSequence) {
  const auto t = run(config(4, 1)).transcript;
  for (std::size_t i = 0; i < t.events.size(); ++i) EXPECT_EQ(t.events[i].seq, i);
  for (const auto& e : t.events) {
    if (e.llm_call) EXPECT_NE(e.request_hash, 0u);
  }
}

TEST_F(ProtocolTest, AbortedTrialResumesFromCheckpoint) {
  fixture::TempDir dir;
  const auto c = config(4, 2, 31);
  const auto prompts = default_prompts();
  const auto full = run(c).transcript;

  auto dying = std::make_shared<FailingBackend>(20, 16);
  LlmGateway dying_gw(scripted_backend_config(), dying);
  TrialOptions options;
  options.checkpoint_path = dir / "trial.checkpoint.jsonl";
  std::vector<Event> partial_events;
  try {
    run_trial(*ecosystem_, c, dying_gw, prompts, options);
    FAIL() << "trial should abort";
  } catch (const TrialAborted& e) {
    partial_events = e.partial().events;
  }
  ASSERT_TRUE(std::filesystem::exists(options.checkpoint_path));
  const auto saved = load_transcript_events(options.checkpoint_path);
  EXPECT_EQ(saved.size(), partial_events.size());

  auto fresh = std::make_shared<FailingBackend>(1000, 16);
  LlmGateway fresh_gw(scripted_backend_config(), fresh);
  TrialOptions resume;
  resume.resume_events = saved;
  const auto resumed = run_trial(*ecosystem_, c, fresh_gw, prompts, resume).transcript;
  EXPECT_EQ(serialize_transcript(resumed), serialize_transcript(full));
  std::size_t llm_calls = 0;
  for (const auto& e : full.events) llm_calls += e.llm_call;
  EXPECT_EQ(fresh->calls(), llm_calls - 20);
}

TEST(ParseTopicScores, Cases) {
  EXPECT_EQ(parse_topic_scores("1: 7\n2: 3", 2), (std::vector<int>{7, 3}));
  EXPECT_EQ(parse_topic_scores("Scores\n 2: 9 \n1:1\n", 2), (std::vector<int>{1, 9}));
  EXPECT_FALSE(parse_topic_scores("1: 7", 2));
  EXPECT_FALSE(parse_topic_scores("1: 11\n2: 3", 2));
  EXPECT_FALSE(parse_topic_scores("1: 0\n2: 3", 2));
  EXPECT_FALSE(parse_topic_scores("nothing", 1));
}

TEST(ParseBallot, Cases) {
  const std::vector<std::string> ids{"I2", "I3", "I4"};
  const auto b = parse_ballot("Thoughts...\nRANKING: I3 > I2 > I4\nCONFIDENCE: I2=4, I3=9, I4=1", "r1", ids);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->reviewer_id, "r1");
  EXPECT_EQ(b->ranking, (std::map<std::string, int>{{"I2", 2}, {"I3", 1}, {"I4", 3}}));
  EXPECT_EQ(b->confidences, (std::map<std::string, int>{{"I2", 4}, {"I3", 9}, {"I4", 1}}));
  EXPECT_FALSE(parse_ballot("RANKING: I3 > I3 > I4\nCONFIDENCE: I2=4, I3=9, I4=1", "r", ids));
  EXPECT_FALSE(parse_ballot("RANKING: I3 > I2\nCONFIDENCE: I2=4, I3=9, I4=1", "r", ids));
  EXPECT_FALSE(parse_ballot("RANKING: I3 > I2 > I9\nCONFIDENCE: I2=4, I3=9, I4=1", "r", ids));
  EXPECT_FALSE(parse_ballot("RANKING: I3 > I2 > I4\nCONFIDENCE: I2=4, I3=19, I4=1", "r", ids));
  EXPECT_FALSE(parse_ballot("RANKING: I3 > I2 > I4\nCONFIDENCE: I2=4, I3=9", "r", ids));
  EXPECT_FALSE(parse_ballot("RANKING: I3 > I2 > I4", "r", ids));
}

TEST(ParseWinner, Cases) {
  const std::vector<std::string> ids{"I2", "I3"};
  EXPECT_EQ(parse_winner("I pick\nWINNER: I3", ids), std::optional<std::string>("I3"));
  EXPECT_FALSE(parse_winner("WINNER: I7", ids));
  EXPECT_FALSE(parse_winner("I3 wins", ids));
}

TEST(RunConfig, Validation) {
  RunConfig c;
  EXPECT_FALSE(thrown_code([&] { c.validate(); }));
  c.team_size = 2;
  EXPECT_EQ(thrown_code([&] { c.validate(); }), ErrorCode::kInvalidConfig);
  c = RunConfig{};
  c.rounds = 0;
  EXPECT_EQ(thrown_code([&] { c.validate(); }), ErrorCode::kInvalidConfig);
  c = RunConfig{};
  c.diversity_fraction = -0.1;
  EXPECT_EQ(thrown_code([&] { c.validate(); }), ErrorCode::kInvalidConfig);
}

TEST(ProfileSummary, ListsRecentTitlesFirst) {
  const Corpus corpus({fixture::pub("a", 2001, 0, {"r"}), fixture::pub("b", 2010, 0, {"r"}),
                       fixture::pub("c", 2005, 0, {"r"})},
                      {fixture::researcher("r", {"a", "b", "c"})});
  const auto s = profile_summary(corpus, "r", 2);
  EXPECT_EQ(s, "Name: Name r\nAffiliations: Lab\nTopics: general\nPublications: 3\n- Title of b (2010)\n- Title of c (2005)");
}
