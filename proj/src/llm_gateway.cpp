#include "ideation/llm_gateway.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "ideation/error.hpp"
#include "ideation/rng.hpp"
#include "jsonl.hpp"

namespace ideation {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

void ChatRequest::validate() const {
  if (messages.empty()) throw Error(ErrorCode::kInvalidRequest, "request has no messages");
  for (std::size_t i = 1; i < messages.size(); ++i) {
    if (messages[i].role == Role::kAssistant && messages[i - 1].role == Role::kAssistant) {
      throw Error(ErrorCode::kInvalidRequest, "two consecutive assistant turns");
    }
  }
  if (!(temperature >= 0.0)) throw Error(ErrorCode::kInvalidRequest, "temperature must be >= 0");
  if (max_tokens <= 0) throw Error(ErrorCode::kInvalidRequest, "max_tokens must be positive");
}

void BackendConfig::validate() const {
  if (max_retries < 0) throw Error(ErrorCode::kInvalidConfig, "max_retries must be >= 0");
  if (timeout.count() <= 0) throw Error(ErrorCode::kInvalidConfig, "timeout must be positive");
  if (kind == BackendKind::kHttpChat && endpoint.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "http_chat backend requires an endpoint");
  }
  if (kind == BackendKind::kScripted && embed_dim == 0) {
    throw Error(ErrorCode::kInvalidConfig, "scripted backend requires embed_dim >= 1");
  }
}

void BackendConfig::apply_environment() {
  if (endpoint.empty()) {
    if (const char* v = std::getenv("IDEATION_LLM_ENDPOINT")) endpoint = v;
  }
  if (embed_endpoint.empty()) {
    if (const char* v = std::getenv("IDEATION_EMBED_ENDPOINT")) embed_endpoint = v;
  }
}

std::string BackendConfig::identity() const {
  if (kind == BackendKind::kScripted) {
    return "scripted(embed_dim=" + std::to_string(embed_dim) + ",embed_seed=" +
           std::to_string(embed_seed) + ")";
  }
  return "http_chat(" + endpoint + "," + model_name + "," + embed_model_name + ")";
}

// ---------------------------------------------------------------- scripting

void Script::set(std::string key, std::string response_template) {
  entries_[std::move(key)] = std::move(response_template);
}

const std::string* Script::find(const std::string& tag, const std::string& arg) const {
  if (tag.empty()) return nullptr;
  if (!arg.empty()) {
    if (auto it = entries_.find(tag + " " + arg); it != entries_.end()) return &it->second;
  }
  if (auto it = entries_.find(tag); it != entries_.end()) return &it->second;
  return nullptr;
}

Script load_script(const std::filesystem::path& path) {
  Script script;
  detail::for_each_record(path, [&](const nlohmann::json& record, std::size_t) {
    script.set(record.at("tag").get<std::string>(), record.at("response").get<std::string>());
  });
  return script;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

const ChatMessage* last_user_message(const ChatRequest& request) {
  for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
    if (it->role == Role::kUser) return &*it;
  }
  return nullptr;
}

std::string hex16(std::uint64_t value) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(value));
  return buf.data();
}

std::string filler_paragraph(std::uint64_t hash) {
  static constexpr std::array<std::string_view, 32> kWords = {
      "adaptive",   "framework", "signal",     "cohort",   "latent",    "evidence",
      "mechanism",  "robust",    "structure",  "transfer", "gradient",  "clinical",
      "network",    "sparse",    "hypothesis", "baseline", "inference", "protocol",
      "dynamics",   "ensemble",  "variance",   "corpus",   "synthesis", "outcome",
      "embedding",  "causal",    "benchmark",  "regime",   "emergent",  "calibration",
      "trajectory", "modality"};
  Rng rng(hash);
  std::string text;
  for (int i = 0; i < 40; ++i) {
    if (i > 0) text += (i % 10 == 0) ? ". " : " ";
    text += kWords[rng.uniform_index(kWords.size())];
  }
  text += ".";
  return text;
}

}  // namespace

RequestTag extract_tag(const ChatRequest& request) {
  const ChatMessage* message = last_user_message(request);
  if (message == nullptr) return {};
  std::string_view text = message->content;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    std::size_t i = 0;
    if (!line.empty() && std::isupper(static_cast<unsigned char>(line[0]))) {
      while (i < line.size() && (std::isupper(static_cast<unsigned char>(line[i])) || line[i] == '_')) ++i;
      if (i < line.size() && line[i] == ':') {
        return {std::string(line.substr(0, i + 1)), trim(line.substr(i + 1))};
      }
    }
    pos = end + 1;
  }
  return {};
}

std::optional<std::string> extract_section(std::string_view text, std::string_view name) {
  const std::string open = "[[" + std::string(name) + "]]";
  const std::string close = "[[/" + std::string(name) + "]]";
  std::size_t begin = text.find(open);
  if (begin == std::string_view::npos) return std::nullopt;
  begin += open.size();
  std::size_t end = text.find(close, begin);
  if (end == std::string_view::npos) return std::nullopt;
  std::string_view body = text.substr(begin, end - begin);
  if (!body.empty() && body.front() == '\n') body.remove_prefix(1);
  if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
  return std::string(body);
}

std::uint64_t request_hash(const ChatRequest& request) {
  std::uint64_t h = fnv1a64(request.system_prompt);
  for (const auto& m : request.messages) {
    h = fnv1a64("\x1e", h);
    h = fnv1a64(to_string(m.role), h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(m.content, h);
  }
  const std::string seed = request.seed ? std::to_string(*request.seed) : std::string("-");
  return fnv1a64("\x1d" + seed, h);
}

ScriptedBackend::ScriptedBackend(Script script, std::size_t embed_dim, std::uint64_t embed_seed)
    : script_(std::move(script)), embed_dim_(embed_dim), embed_seed_(embed_seed) {
  if (embed_dim_ == 0) throw Error(ErrorCode::kInvalidConfig, "embed_dim must be positive");
}

std::string ScriptedBackend::complete(const ChatRequest& request) {
  const auto hash = request_hash(request);
  const auto tag = extract_tag(request);
  const std::string* tmpl = script_.find(tag.tag, tag.arg);
  if (tmpl == nullptr) return filler_paragraph(hash);

  const ChatMessage* message = last_user_message(request);
  const std::string_view body = message != nullptr ? std::string_view(message->content) : std::string_view();
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl->size()) {
    const std::size_t open = tmpl->find('{', pos);
    if (open == std::string::npos) {
      out.append(*tmpl, pos, std::string::npos);
      break;
    }
    out.append(*tmpl, pos, open - pos);
    const std::size_t close = tmpl->find('}', open);
    if (close == std::string::npos) {
      out.append(*tmpl, open, std::string::npos);
      break;
    }
    const std::string key = tmpl->substr(open + 1, close - open - 1);
    if (key == "arg") {
      out += tag.arg;
    } else if (key == "hash") {
      out += hex16(hash);
    } else if (key == "seed") {
      out += std::to_string(request.seed.value_or(0));
    } else if (key.rfind("section:", 0) == 0) {
      out += extract_section(body, key.substr(8)).value_or("");
    } else {
      out.append(*tmpl, open, close - open + 1);
    }
    pos = close + 1;
  }
  return out;
}

std::vector<double> ScriptedBackend::embed(std::string_view text) {
  std::uint64_t state = mix64(fnv1a64(text) ^ mix64(embed_seed_));
  std::vector<double> values(embed_dim_);
  for (auto& v : values) {
    state = mix64(state);
    v = static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  return values;
}

// ------------------------------------------------------------------ gateway

LlmGateway::LlmGateway(BackendConfig config, std::shared_ptr<ChatBackend> backend)
    : config_(std::move(config)), backend_(std::move(backend)) {
  config_.validate();
  if (!backend_) throw Error(ErrorCode::kInvalidConfig, "gateway requires a backend");
}

template <typename Call>
auto LlmGateway::with_retries(Call&& call) -> decltype(call()) {
  auto backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    counters_.attempts.fetch_add(1, std::memory_order_relaxed);
    try {
      return call();
    } catch (const Error& e) {
      const bool retryable = e.code() == ErrorCode::kTimeout || e.code() == ErrorCode::kTransport;
      if (!retryable || attempt >= config_.max_retries) throw;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

std::string LlmGateway::chat(const ChatRequest& request) {
  request.validate();
  counters_.chat_calls.fetch_add(1, std::memory_order_relaxed);
  std::string text = with_retries([&] { return backend_->complete(request); });
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::kEmptyCompletion, "backend returned an empty completion");
  }
  return text;
}

EmbeddingVector LlmGateway::embed(std::string_view text, std::optional<std::size_t> expected_dim) {
  if (text.empty()) throw Error(ErrorCode::kInvalidRequest, "cannot embed empty text");
  counters_.embed_calls.fetch_add(1, std::memory_order_relaxed);
  EmbeddingVector vector(with_retries([&] { return backend_->embed(text); }));
  std::optional<std::size_t> want = expected_dim;
  if (!want && config_.embed_dim != 0) want = config_.embed_dim;
  if (want && vector.dim() != *want) {
    throw Error(ErrorCode::kDimensionMismatch, "backend returned dim " + std::to_string(vector.dim()) +
                                                   ", expected " + std::to_string(*want));
  }
  return vector;
}

std::shared_ptr<LlmGateway> make_gateway(const BackendConfig& config, Script script) {
  config.validate();
  std::shared_ptr<ChatBackend> backend;
  if (config.kind == BackendKind::kScripted) {
    backend = std::make_shared<ScriptedBackend>(std::move(script), config.embed_dim, config.embed_seed);
  } else {
    backend = std::make_shared<HttpBackend>(config);
  }
  return std::make_shared<LlmGateway>(config, std::move(backend));
}

}  // namespace ideation
