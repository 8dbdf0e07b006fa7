// Command-line front end: ingest, run, score, report, synth.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ideation/corpus.hpp"
#include "ideation/error.hpp"
#include "ideation/experiment.hpp"
#include "ideation/llm_gateway.hpp"
#include "ideation/novelty_metrics.hpp"
#include "ideation/prompts.hpp"
#include "ideation/protocol.hpp"
#include "ideation/toy_corpus.hpp"

namespace {

using namespace ideation;

/// Flags shared by subcommands that read a corpus and talk to a backend.
/// Each flag only overrides the config file when it was given.
struct CommonFlags {
  std::string config;
  std::string publications, researchers, embeddings, backend, script, model;
  int pivot_year = 2011;
  std::size_t embed_dim = 64;
  std::size_t baseline_sample = 0;
  CLI::Option* pivot_opt = nullptr;
  CLI::Option* embed_dim_opt = nullptr;
  CLI::Option* baseline_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file; flags override it")->check(CLI::ExistingFile);
    app->add_option("--publications", publications, "Publications JSONL");
    app->add_option("--researchers", researchers, "Researchers JSONL");
    app->add_option("--embeddings", embeddings, "Embedding sidecar JSONL");
    pivot_opt = app->add_option("--pivot-year", pivot_year, "First contemporary year");
    app->add_option("--backend", backend, "scripted or http")->check(CLI::IsMember({"scripted", "http"}));
    app->add_option("--script", script, "Scripted backend response file (JSONL)");
    app->add_option("--model", model, "Chat model name for the http backend");
    embed_dim_opt = app->add_option("--embed-dim", embed_dim, "Scripted embedding dimension");
    baseline_opt = app->add_option("--baseline-sample", baseline_sample,
                                   "Publications sampled for the baseline means (default: all)");
  }

  ExperimentSpec spec() const {
    ExperimentSpec s = config.empty() ? ExperimentSpec{} : load_experiment_spec(config);
    if (!publications.empty()) s.publications = publications;
    if (!researchers.empty()) s.researchers = researchers;
    if (!embeddings.empty()) s.embeddings = embeddings;
    if (pivot_opt->count()) s.pivot_year = pivot_year;
    if (backend == "scripted") s.backend.kind = BackendKind::kScripted;
    if (backend == "http" && s.backend.kind != BackendKind::kHttpChat) {
      s.backend.kind = BackendKind::kHttpChat;
      if (s.backend.temperature == 0.0) s.backend.temperature = 0.7;
      if (!embed_dim_opt->count()) s.backend.embed_dim = 0;
    }
    if (!script.empty()) s.script = script;
    if (!model.empty()) s.backend.model_name = model;
    if (embed_dim_opt->count()) s.backend.embed_dim = embed_dim;
    if (baseline_opt->count()) s.baseline_sample = baseline_sample;
    s.backend.apply_environment();
    return s;
  }
};

std::shared_ptr<LlmGateway> gateway_for(const ExperimentSpec& spec) {
  return make_gateway(spec.backend, spec.script.empty() ? default_script() : load_script(spec.script));
}

EmbeddingIndex index_for(const ExperimentSpec& spec, const Corpus& corpus, LlmGateway& gateway) {
  if (!spec.embeddings.empty() && std::filesystem::exists(spec.embeddings)) return load_embeddings(spec.embeddings);
  return embed_corpus(corpus, gateway);
}

int cmd_ingest(const CommonFlags& flags, const std::string& embeddings_out, const std::string& canonical_dir) {
  ExperimentSpec spec = flags.spec();
  if (spec.publications.empty() || spec.researchers.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "--publications and --researchers are required");
  }
  const Corpus corpus = load_corpus(spec.publications, spec.researchers);
  const auto split = split_by_year(corpus, spec.pivot_year);
  std::printf("corpus ok: %zu publications, %zu researchers; %zu historical / %zu contemporary at pivot %d\n",
              corpus.publications().size(), corpus.researchers().size(), split.historical.size(),
              split.contemporary.size(), spec.pivot_year);
  if (!canonical_dir.empty()) {
    const std::filesystem::path dir(canonical_dir);
    save_corpus(corpus, dir / "publications.jsonl", dir / "researchers.jsonl");
    std::printf("canonical corpus written to %s\n", canonical_dir.c_str());
  }
  const std::string out = !embeddings_out.empty() ? embeddings_out : spec.embeddings.string();
  if (out.empty()) return 0;
  auto gateway = gateway_for(spec);
  const auto index = embed_corpus(corpus, *gateway);
  save_embeddings(index, out);
  std::printf("embedded %zu abstracts (dim %zu) into %s\n", index.size(), index.dim(), out.c_str());
  return 0;
}

int cmd_run(ExperimentSpec spec) {
  const auto report = run_experiment(spec);
  std::fputs(render_markdown(report).c_str(), stdout);
  std::printf("\nreports written to %s\n", spec.output_dir.string().c_str());
  return report.all_completed() ? 0 : 2;
}

int cmd_score(const CommonFlags& flags, const std::string& text, const std::string& file) {
  ExperimentSpec spec = flags.spec();
  std::string abstract = text;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + file);
    abstract.assign(std::istreambuf_iterator<char>(in), {});
  }
  if (abstract.empty()) throw Error(ErrorCode::kInvalidConfig, "give --abstract or --abstract-file");
  auto gateway = gateway_for(spec);
  Corpus corpus = load_corpus(spec.publications, spec.researchers);
  EmbeddingIndex index = index_for(spec, corpus, *gateway);
  const Ecosystem eco(std::move(corpus), std::move(index), spec.pivot_year, spec.baseline_sample,
                      spec.baseline_seed);
  const auto vec = gateway->embed(abstract, eco.index().dim());
  const auto m = evaluate_abstract(vec, eco.sides(), eco.corpus(), eco.stats());
  nlohmann::json out = {{"hd_raw", m.hd_raw}, {"cd_raw", m.cd_raw}, {"ci_raw", m.ci_raw},
                        {"hd", m.hd},         {"cd", m.cd},         {"ci", m.ci},
                        {"on", m.on ? nlohmann::json(*m.on) : nlohmann::json(nullptr)},
                        {"on_error", m.on_error},
                        {"neighbor_ids_historical", m.neighbor_ids_historical},
                        {"neighbor_ids_contemporary", m.neighbor_ids_contemporary}};
  std::cout << out.dump(2) << "\n";
  return m.on ? 0 : 3;
}

int cmd_report(const std::string& input, const std::string& output) {
  const auto report = load_report(input);
  const std::filesystem::path out =
      output.empty() ? std::filesystem::path(input).parent_path() / "report.md" : std::filesystem::path(output);
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + out.string());
  f << render_markdown(report);
  std::printf("%s\n", out.string().c_str());
  return 0;
}

int cmd_synth(const std::string& dir, const ToyCorpusOptions& options) {
  const Corpus corpus = make_toy_corpus(options);
  const std::filesystem::path d(dir);
  save_corpus(corpus, d / "publications.jsonl", d / "researchers.jsonl");
  std::printf("wrote %zu publications and %zu researchers to %s\n", corpus.publications().size(),
              corpus.researchers().size(), dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent scientific ideation experiments"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and embed its abstracts");
  CommonFlags ingest_flags;
  ingest_flags.attach(ingest);
  std::string embeddings_out, canonical_dir;
  ingest->add_option("--embeddings-out", embeddings_out, "Where to write the embedding sidecar");
  ingest->add_option("--canonical-dir", canonical_dir, "Also write the corpus in canonical form here");

  // run
  auto* run = app.add_subcommand("run", "Run a batch of seeded trials and write reports");
  CommonFlags run_flags;
  run_flags.attach(run);
  std::string output_dir;
  std::size_t team_size = 4, top_k = 8, parallel = 1;
  int rounds = 5, trials = 20;
  double diversity = 0.0;
  std::uint64_t seed = 0;
  std::string reviewer_pool;
  bool no_discussion = false, no_vote = false, resume = false;
  run->add_option("--output-dir", output_dir, "Directory for transcripts and reports");
  auto* team_opt = run->add_option("--team-size", team_size, "Agents per team (leader included)");
  auto* frac_opt = run->add_option("--diversity-fraction", diversity, "Share of scientists off the leader's topic");
  auto* seed_opt = run->add_option("--seed", seed, "Base seed; trial i uses seed + i");
  auto* rounds_opt = run->add_option("--rounds", rounds, "Knowledge-exchange rounds");
  auto* topk_opt = run->add_option("--top-k", top_k, "Retrieved references per idea");
  auto* trials_opt = run->add_option("--trials", trials, "Independent trials");
  run->add_flag("--no-discussion", no_discussion, "Skip revision, synthesis and reflection");
  run->add_flag("--no-vote", no_vote, "Leader picks the winning idea instead of a vote");
  run->add_option("--reviewer-pool", reviewer_pool, "internal or external reviewers")
      ->check(CLI::IsMember({"internal", "external"}));
  auto* parallel_opt = run->add_option("--parallel", parallel, "Trials run concurrently");
  run->add_flag("--resume", resume, "Reuse transcripts and checkpoints in the output directory");

  // score
  auto* score = app.add_subcommand("score", "Novelty metrics for an externally supplied abstract");
  CommonFlags score_flags;
  score_flags.attach(score);
  std::string abstract_text, abstract_file;
  score->add_option("--abstract", abstract_text, "Abstract text");
  score->add_option("--abstract-file", abstract_file, "File holding the abstract")->check(CLI::ExistingFile);

  // report
  auto* report = app.add_subcommand("report", "Re-render report.md from report.jsonl");
  std::string report_in, report_out;
  report->add_option("--input", report_in, "report.jsonl")->required()->check(CLI::ExistingFile);
  report->add_option("--output", report_out, "Markdown output (default: next to the input)");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic toy corpus");
  std::string synth_dir;
  ToyCorpusOptions toy;
  synth->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth->add_option("--researcher-count", toy.researchers, "Researchers");
  synth->add_option("--publication-count", toy.publications, "Publications");
  synth->add_option("--topics", toy.topics, "Distinct topics (1-8)");
  synth->add_option("--seed", toy.seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(ingest_flags, embeddings_out, canonical_dir);
    if (*run) {
      ExperimentSpec spec = run_flags.spec();
      if (!output_dir.empty()) spec.output_dir = output_dir;
      if (team_opt->count()) spec.run.team_size = team_size;
      if (frac_opt->count()) spec.run.diversity_fraction = diversity;
      if (seed_opt->count()) spec.run.seed = seed;
      if (rounds_opt->count()) spec.run.rounds = rounds;
      if (topk_opt->count()) spec.run.top_k = top_k;
      if (trials_opt->count()) spec.run.trials = trials;
      if (no_discussion) spec.run.enable_discussion = false;
      if (no_vote) spec.run.enable_vote = false;
      if (reviewer_pool == "external") spec.run.reviewer_pool = ReviewerPool::kExternal;
      if (reviewer_pool == "internal") spec.run.reviewer_pool = ReviewerPool::kInternal;
      if (parallel_opt->count()) spec.parallel = parallel;
      if (resume) spec.resume = true;
      return cmd_run(spec);
    }
    if (*score) return cmd_score(score_flags, abstract_text, abstract_file);
    if (*report) return cmd_report(report_in, report_out);
    if (*synth) return cmd_synth(synth_dir, toy);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
