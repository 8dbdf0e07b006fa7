#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ideation/corpus.hpp"
#include "ideation/embed_index.hpp"
#include "ideation/llm_gateway.hpp"
#include "ideation/novelty_metrics.hpp"
#include "ideation/protocol.hpp"

namespace ideation {

struct ReportFormats {
  bool structured = true;  // report.jsonl
  bool markdown = true;    // report.md
};

struct ExperimentSpec {
  std::filesystem::path publications;
  std::filesystem::path researchers;
  /// Embedding sidecar; when empty or missing, the corpus is embedded through
  /// the gateway at startup.
  std::filesystem::path embeddings;
  int pivot_year = 2011;
  std::optional<std::size_t> baseline_sample;
  std::uint64_t baseline_seed = 0;
  RunConfig run;
  BackendConfig backend;
  /// Scripted backend only; empty means the built-in script.
  std::filesystem::path script;
  std::filesystem::path output_dir = "out";
  ReportFormats formats;
  /// Trials executed concurrently.
  std::size_t parallel = 1;
  /// Reuse transcripts and checkpoints already in output_dir.
  bool resume = false;

  /// Throws kInvalidConfig.
  void validate() const;
};

/// Applies the keys of a config object onto `spec`; unknown keys throw
/// kInvalidConfig so typos do not pass silently.
void apply_config(ExperimentSpec& spec, const nlohmann::json& config);

/// JSON config file; relative paths resolve against the file's directory.
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

/// Effective configuration, in the same shape apply_config reads.
nlohmann::json to_json(const ExperimentSpec& spec);

/// 16 hex digits over the reproducibility-relevant part of the spec
/// (everything except output location, resume and concurrency).
std::string config_hash(const ExperimentSpec& spec);

/// Embeds every abstract, in corpus order.
EmbeddingIndex embed_corpus(const Corpus& corpus, LlmGateway& gateway);

struct TrialOutcome {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool completed = false;
  std::optional<MetricReport> metrics;
  std::string error;       // abort reason
  std::string transcript;  // file name inside the output directory
};

struct MeanMetrics {
  double hd = 0.0;
  double cd = 0.0;
  double ci = 0.0;
  std::optional<double> on;    // over trials with a defined ON
  std::size_t trials = 0;      // completed trials averaged
  std::size_t on_trials = 0;
};

struct AggregateReport {
  nlohmann::json metadata;
  std::vector<TrialOutcome> trials;
  std::optional<MeanMetrics> mean;  // empty when no trial completed

  std::size_t aborted() const;
  bool all_completed() const { return aborted() == 0; }
};

/// Arithmetic means of the completed trials.
std::optional<MeanMetrics> mean_metrics(const std::vector<TrialOutcome>& trials);

/// Loads the corpus, builds the ecosystem, runs the seeded trials (seed of
/// trial i = run.seed + i), writes transcripts and reports into output_dir.
AggregateReport run_experiment(const ExperimentSpec& spec);

std::string render_markdown(const AggregateReport& report);
std::string render_structured(const AggregateReport& report);

/// Writes report.jsonl and/or report.md. Throws kIo.
void emit_report(const AggregateReport& report, const std::filesystem::path& dir, const ReportFormats& formats);

/// Reads a report.jsonl written by emit_report.
AggregateReport load_report(const std::filesystem::path& path);

/// Text shown in a markdown cell for a metric that could not be computed.
inline constexpr const char* kUndefinedCell = "undefined";
inline constexpr const char* kAbortedCell = "aborted";

}  // namespace ideation
