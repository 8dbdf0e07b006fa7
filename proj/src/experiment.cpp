#include "ideation/experiment.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

#include "ideation/prompts.hpp"
#include "ideation/transcript.hpp"
#include "jsonl.hpp"

namespace ideation {

namespace {

using nlohmann::json;

std::string hex16(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, value);
  return buf;
}

std::string two_decimals(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); }

template <typename Fn>
void for_keys(const json& object, const std::string& where, Fn&& fn) {
  if (!object.is_object()) bad_config(where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    try {
      if (!fn(key, value)) bad_config("unknown key '" + key + "' in " + where);
    } catch (const json::exception& e) {
      bad_config("bad value for '" + key + "' in " + where + ": " + e.what());
    }
  }
}

void apply_run(RunConfig& run, const json& object) {
  for_keys(object, "run", [&](const std::string& key, const json& v) {
    if (key == "team_size") run.team_size = v.get<std::size_t>();
    else if (key == "rounds") run.rounds = v.get<int>();
    else if (key == "top_k") run.top_k = v.get<std::size_t>();
    else if (key == "trials") run.trials = v.get<int>();
    else if (key == "enable_discussion") run.enable_discussion = v.get<bool>();
    else if (key == "enable_vote") run.enable_vote = v.get<bool>();
    else if (key == "reviewer_pool") {
      const auto pool = v.get<std::string>();
      if (pool == "internal") run.reviewer_pool = ReviewerPool::kInternal;
      else if (pool == "external") run.reviewer_pool = ReviewerPool::kExternal;
      else bad_config("reviewer_pool must be 'internal' or 'external'");
    } else if (key == "diversity_fraction") run.diversity_fraction = v.get<double>();
    else if (key == "seed") run.seed = v.get<std::uint64_t>();
    else if (key == "profile_titles") run.profile_titles = v.get<std::size_t>();
    else if (key == "call_parallelism") run.parallelism = v.get<std::size_t>();
    else return false;
    return true;
  });
}

void apply_backend(ExperimentSpec& spec, const json& object) {
  auto& b = spec.backend;
  bool temperature_set = false;
  bool embed_dim_set = false;
  for_keys(object, "backend", [&](const std::string& key, const json& v) {
    if (key == "kind") {
      const auto kind = v.get<std::string>();
      if (kind == "scripted") b.kind = BackendKind::kScripted;
      else if (kind == "http") b.kind = BackendKind::kHttpChat;
      else bad_config("backend kind must be 'scripted' or 'http'");
    } else if (key == "endpoint") b.endpoint = v.get<std::string>();
    else if (key == "embed_endpoint") b.embed_endpoint = v.get<std::string>();
    else if (key == "model") b.model_name = v.get<std::string>();
    else if (key == "embed_model") b.embed_model_name = v.get<std::string>();
    else if (key == "timeout_ms") b.timeout = std::chrono::milliseconds(v.get<std::int64_t>());
    else if (key == "max_retries") b.max_retries = v.get<int>();
    else if (key == "initial_backoff_ms") b.initial_backoff = std::chrono::milliseconds(v.get<std::int64_t>());
    else if (key == "embed_dim") {
      b.embed_dim = v.get<std::size_t>();
      embed_dim_set = true;
    }
    else if (key == "embed_seed") b.embed_seed = v.get<std::uint64_t>();
    else if (key == "temperature") {
      b.temperature = v.get<double>();
      temperature_set = true;
    } else if (key == "max_tokens") b.max_tokens = v.get<int>();
    else if (key == "script") spec.script = v.get<std::string>();
    else return false;
    return true;
  });
  // Live models sample; the scripted backend ignores temperature anyway.
  if (!temperature_set && b.kind == BackendKind::kHttpChat) b.temperature = 0.7;
  // A live embedder's width is whatever the model produces; the index checks it.
  if (!embed_dim_set && b.kind == BackendKind::kHttpChat) b.embed_dim = 0;
}

std::string reviewer_pool_name(ReviewerPool pool) {
  return pool == ReviewerPool::kExternal ? "external" : "internal";
}

json metrics_json(const MetricReport& m) {
  return {{"hd_raw", m.hd_raw},
          {"cd_raw", m.cd_raw},
          {"ci_raw", m.ci_raw},
          {"hd", m.hd},
          {"cd", m.cd},
          {"ci", m.ci},
          {"on", m.on ? json(*m.on) : json(nullptr)},
          {"on_error", m.on_error},
          {"neighbor_ids_historical", m.neighbor_ids_historical},
          {"neighbor_ids_contemporary", m.neighbor_ids_contemporary}};
}

MetricReport metrics_from_json(const json& r) {
  MetricReport m;
  m.hd_raw = r.at("hd_raw").get<double>();
  m.cd_raw = r.at("cd_raw").get<double>();
  m.ci_raw = r.at("ci_raw").get<double>();
  m.hd = r.at("hd").get<double>();
  m.cd = r.at("cd").get<double>();
  m.ci = r.at("ci").get<double>();
  if (!r.at("on").is_null()) m.on = r.at("on").get<double>();
  m.on_error = r.value("on_error", std::string());
  m.neighbor_ids_historical = r.value("neighbor_ids_historical", std::vector<std::string>{});
  m.neighbor_ids_contemporary = r.value("neighbor_ids_contemporary", std::vector<std::string>{});
  return m;
}

std::string trial_file(std::size_t trial) { return "trial_" + std::to_string(trial) + ".jsonl"; }
std::string checkpoint_file(std::size_t trial) { return "trial_" + std::to_string(trial) + ".checkpoint.jsonl"; }

}  // namespace

void ExperimentSpec::validate() const {
  if (publications.empty() || researchers.empty()) bad_config("publications and researchers paths are required");
  if (output_dir.empty()) bad_config("output directory is required");
  if (parallel < 1) bad_config("parallel must be at least 1");
  if (!formats.structured && !formats.markdown) bad_config("at least one report format is required");
  if (baseline_sample && *baseline_sample == 0) bad_config("baseline_sample must be positive");
  run.validate();
  backend.validate();
}

void apply_config(ExperimentSpec& spec, const json& config) {
  for_keys(config, "config", [&](const std::string& key, const json& v) {
    if (key == "publications") spec.publications = v.get<std::string>();
    else if (key == "researchers") spec.researchers = v.get<std::string>();
    else if (key == "embeddings") spec.embeddings = v.get<std::string>();
    else if (key == "pivot_year") spec.pivot_year = v.get<int>();
    else if (key == "baseline_sample") {
      if (v.is_null()) spec.baseline_sample.reset();
      else spec.baseline_sample = v.get<std::size_t>();
    } else if (key == "baseline_seed") spec.baseline_seed = v.get<std::uint64_t>();
    else if (key == "output_dir") spec.output_dir = v.get<std::string>();
    else if (key == "parallel") spec.parallel = v.get<std::size_t>();
    else if (key == "formats") {
      spec.formats = {false, false};
      for (const auto& f : v) {
        const auto name = f.get<std::string>();
        if (name == "structured") spec.formats.structured = true;
        else if (name == "markdown") spec.formats.markdown = true;
        else bad_config("unknown report format '" + name + "'");
      }
    } else if (key == "run") apply_run(spec.run, v);
    else if (key == "backend") apply_backend(spec, v);
    else return false;
    return true;
  });
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  json config;
  try {
    config = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    bad_config("config " + path.string() + ": " + e.what());
  }
  ExperimentSpec spec;
  apply_config(spec, config);
  const auto base = path.parent_path();
  for (auto* p : {&spec.publications, &spec.researchers, &spec.embeddings, &spec.script, &spec.output_dir}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return spec;
}

json to_json(const ExperimentSpec& spec) {
  const auto& r = spec.run;
  const auto& b = spec.backend;
  std::vector<std::string> formats;
  if (spec.formats.structured) formats.push_back("structured");
  if (spec.formats.markdown) formats.push_back("markdown");
  return {
      {"publications", spec.publications.string()},
      {"researchers", spec.researchers.string()},
      {"embeddings", spec.embeddings.string()},
      {"pivot_year", spec.pivot_year},
      {"baseline_sample", spec.baseline_sample ? json(*spec.baseline_sample) : json(nullptr)},
      {"baseline_seed", spec.baseline_seed},
      {"output_dir", spec.output_dir.string()},
      {"parallel", spec.parallel},
      {"formats", formats},
      {"run",
       {{"team_size", r.team_size},
        {"rounds", r.rounds},
        {"top_k", r.top_k},
        {"trials", r.trials},
        {"enable_discussion", r.enable_discussion},
        {"enable_vote", r.enable_vote},
        {"reviewer_pool", reviewer_pool_name(r.reviewer_pool)},
        {"diversity_fraction", r.diversity_fraction},
        {"seed", r.seed},
        {"profile_titles", r.profile_titles},
        {"call_parallelism", r.parallelism}}},
      {"backend",
       {{"kind", b.kind == BackendKind::kScripted ? "scripted" : "http"},
        {"endpoint", b.endpoint},
        {"embed_endpoint", b.embed_endpoint},
        {"model", b.model_name},
        {"embed_model", b.embed_model_name},
        {"timeout_ms", b.timeout.count()},
        {"max_retries", b.max_retries},
        {"initial_backoff_ms", b.initial_backoff.count()},
        {"embed_dim", b.embed_dim},
        {"embed_seed", b.embed_seed},
        {"temperature", b.temperature},
        {"max_tokens", b.max_tokens},
        {"script", spec.script.string()}}},
  };
}

std::string config_hash(const ExperimentSpec& spec) {
  json j = to_json(spec);
  j.erase("output_dir");
  j.erase("parallel");
  j.erase("formats");
  j["run"].erase("call_parallelism");
  return hex16(fnv1a64(detail::canonical(j)));
}

EmbeddingIndex embed_corpus(const Corpus& corpus, LlmGateway& gateway) {
  std::optional<EmbeddingIndex> index;
  for (const auto& p : corpus.publications()) {
    auto v = gateway.embed(p.abstract, index ? std::optional(index->dim()) : std::nullopt);
    if (!index) index.emplace(v.dim());
    index->add(p.id, std::move(v));
  }
  if (!index) throw Error(ErrorCode::kInvalidRequest, "corpus has no publications to embed");
  return std::move(*index);
}

std::size_t AggregateReport::aborted() const {
  std::size_t n = 0;
  for (const auto& t : trials) n += !t.completed;
  return n;
}

std::optional<MeanMetrics> mean_metrics(const std::vector<TrialOutcome>& trials) {
  MeanMetrics mean;
  double on_sum = 0.0;
  for (const auto& t : trials) {
    if (!t.completed || !t.metrics) continue;
    mean.hd += t.metrics->hd;
    mean.cd += t.metrics->cd;
    mean.ci += t.metrics->ci;
    ++mean.trials;
    if (t.metrics->on) {
      on_sum += *t.metrics->on;
      ++mean.on_trials;
    }
  }
  if (mean.trials == 0) return std::nullopt;
  const auto n = static_cast<double>(mean.trials);
  mean.hd /= n;
  mean.cd /= n;
  mean.ci /= n;
  if (mean.on_trials > 0) mean.on = on_sum / static_cast<double>(mean.on_trials);
  return mean;
}

AggregateReport run_experiment(const ExperimentSpec& input) {
  ExperimentSpec spec = input;
  spec.backend.apply_environment();
  spec.validate();

  const Script script = spec.script.empty() ? default_script() : load_script(spec.script);
  auto gateway = make_gateway(spec.backend, script);

  Corpus corpus = load_corpus(spec.publications, spec.researchers);
  EmbeddingIndex index = !spec.embeddings.empty() && std::filesystem::exists(spec.embeddings)
                             ? load_embeddings(spec.embeddings)
                             : embed_corpus(corpus, *gateway);
  const Ecosystem ecosystem(std::move(corpus), std::move(index), spec.pivot_year, spec.baseline_sample,
                            spec.baseline_seed);
  const PromptBundle prompts = default_prompts();

  std::filesystem::create_directories(spec.output_dir);
  const auto trials = static_cast<std::size_t>(spec.run.trials);
  std::vector<TrialOutcome> outcomes(trials);

  const auto run_one = [&](std::size_t i) {
    TrialOutcome& out = outcomes[i];
    out.trial = i;
    out.seed = spec.run.seed + i;
    out.transcript = trial_file(i);
    RunConfig config = spec.run;
    config.seed = out.seed;
    const auto transcript_path = spec.output_dir / out.transcript;
    TrialOptions options;
    options.checkpoint_path = spec.output_dir / checkpoint_file(i);
    if (spec.resume) {
      if (std::filesystem::exists(transcript_path)) {
        options.resume_events = load_transcript_events(transcript_path);
      } else if (std::filesystem::exists(options.checkpoint_path)) {
        options.resume_events = load_transcript_events(options.checkpoint_path);
      }
    }
    try {
      TrialResult result = run_trial(ecosystem, config, *gateway, prompts, options);
      save_transcript(result.transcript, transcript_path);
      std::filesystem::remove(options.checkpoint_path);
      out.metrics = std::move(result.metrics);
      out.completed = true;
    } catch (const std::exception& e) {
      out.error = e.what();
      out.completed = false;
    }
  };

  const std::size_t workers = std::min(spec.parallel, trials);
  if (workers <= 1) {
    for (std::size_t i = 0; i < trials; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < trials; i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  AggregateReport report;
  report.metadata = {
      {"seed", spec.run.seed},
      {"trials", spec.run.trials},
      {"config_hash", config_hash(spec)},
      {"backend", spec.backend.identity()},
      {"pivot_year", spec.pivot_year},
      {"team_size", spec.run.team_size},
      {"rounds", spec.run.rounds},
      {"top_k", spec.run.top_k},
      {"diversity_fraction", spec.run.diversity_fraction},
      {"ablations",
       {{"no_discussion", !spec.run.enable_discussion},
        {"no_vote", !spec.run.enable_vote},
        {"reviewer_pool", reviewer_pool_name(spec.run.reviewer_pool)}}},
      {"baseline",
       {{"mean_hd", ecosystem.stats().baseline_mean_hd},
        {"mean_cd", ecosystem.stats().baseline_mean_cd},
        {"mean_ci", ecosystem.stats().baseline_mean_ci},
        {"sample_size", ecosystem.stats().sample_size_used}}},
  };
  report.trials = std::move(outcomes);
  report.mean = mean_metrics(report.trials);
  emit_report(report, spec.output_dir, spec.formats);
  return report;
}

std::string render_markdown(const AggregateReport& report) {
  std::ostringstream out;
  const auto& md = report.metadata;
  out << "# Ideation report\n\n";
  if (md.is_object()) {
    if (md.contains("seed")) out << "- seed: " << md["seed"].dump() << "\n";
    if (md.contains("config_hash")) out << "- config hash: " << md["config_hash"].get<std::string>() << "\n";
    if (md.contains("backend")) out << "- backend: " << md["backend"].get<std::string>() << "\n";
    if (md.contains("ablations")) out << "- ablations: " << md["ablations"].dump() << "\n";
    out << "\n";
  }
  out << "| Trial | HD↑ | CD↓ | CI↑ | ON↑ |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& t : report.trials) {
    out << "| " << t.trial << " | ";
    if (!t.completed || !t.metrics) {
      out << kAbortedCell << " | " << kAbortedCell << " | " << kAbortedCell << " | " << kAbortedCell << " |\n";
      continue;
    }
    const auto& m = *t.metrics;
    out << two_decimals(m.hd) << " | " << two_decimals(m.cd) << " | " << two_decimals(m.ci) << " | "
        << (m.on ? two_decimals(*m.on) : std::string(kUndefinedCell)) << " |\n";
  }
  if (report.mean) {
    const auto& m = *report.mean;
    out << "| Mean | " << two_decimals(m.hd) << " | " << two_decimals(m.cd) << " | " << two_decimals(m.ci) << " | "
        << (m.on ? two_decimals(*m.on) : std::string(kUndefinedCell)) << " |\n";
  }
  if (report.aborted() > 0) {
    out << "\n" << report.aborted() << " of " << report.trials.size() << " trials aborted:\n";
    for (const auto& t : report.trials) {
      if (!t.completed) out << "- trial " << t.trial << ": " << t.error << "\n";
    }
  }
  return out.str();
}

std::string render_structured(const AggregateReport& report) {
  std::ostringstream out;
  json metadata = report.metadata.is_object() ? report.metadata : json::object();
  metadata["record"] = "metadata";
  out << detail::canonical(metadata) << '\n';
  for (const auto& t : report.trials) {
    json record = {{"record", "trial"},     {"trial", t.trial},           {"seed", t.seed},
                   {"completed", t.completed}, {"transcript", t.transcript}, {"error", t.error}};
    record["metrics"] = t.metrics ? metrics_json(*t.metrics) : json(nullptr);
    out << detail::canonical(record) << '\n';
  }
  json aggregate = {{"record", "aggregate"}, {"completed", report.trials.size() - report.aborted()},
                    {"aborted", report.aborted()}};
  if (report.mean) {
    const auto& m = *report.mean;
    aggregate["mean"] = {{"hd", m.hd},
                         {"cd", m.cd},
                         {"ci", m.ci},
                         {"on", m.on ? json(*m.on) : json(nullptr)},
                         {"trials", m.trials},
                         {"on_trials", m.on_trials}};
  } else {
    aggregate["mean"] = nullptr;
  }
  out << detail::canonical(aggregate) << '\n';
  return out.str();
}

void emit_report(const AggregateReport& report, const std::filesystem::path& dir, const ReportFormats& formats) {
  if (report.trials.empty()) throw Error(ErrorCode::kInvalidRequest, "report has no trials");
  const auto write = [&](const std::string& name, const std::string& text) {
    auto out = detail::open_for_write(dir / name);
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + (dir / name).string());
  };
  if (formats.structured) write("report.jsonl", render_structured(report));
  if (formats.markdown) write("report.md", render_markdown(report));
}

AggregateReport load_report(const std::filesystem::path& path) {
  AggregateReport report;
  detail::for_each_record(path, [&](const json& r, std::size_t) {
    const auto kind = r.at("record").get<std::string>();
    if (kind == "metadata") {
      report.metadata = r;
      report.metadata.erase("record");
    } else if (kind == "trial") {
      TrialOutcome t;
      t.trial = r.at("trial").get<std::size_t>();
      t.seed = r.at("seed").get<std::uint64_t>();
      t.completed = r.at("completed").get<bool>();
      t.transcript = r.value("transcript", std::string());
      t.error = r.value("error", std::string());
      if (!r.at("metrics").is_null()) t.metrics = metrics_from_json(r.at("metrics"));
      report.trials.push_back(std::move(t));
    }
  });
  report.mean = mean_metrics(report.trials);
  return report;
}

}  // namespace ideation
