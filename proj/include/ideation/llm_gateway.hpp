#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ideation/embed_index.hpp"

namespace ideation {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::string system_prompt;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::optional<std::uint64_t> seed;

  /// Throws kInvalidRequest: empty messages, two consecutive assistant turns,
  /// negative temperature or non-positive max_tokens.
  void validate() const;
};

enum class BackendKind { kHttpChat, kScripted };

struct BackendConfig {
  BackendKind kind = BackendKind::kScripted;
  std::string endpoint;        // full URL of the chat-completions route
  std::string embed_endpoint;  // full URL of the embeddings route
  std::string model_name = "llama3.1:8b";
  std::string embed_model_name = "mxbai-embed-large";
  std::chrono::milliseconds timeout{120000};
  int max_retries = 2;
  std::chrono::milliseconds initial_backoff{500};
  /// Scripted: dimension of generated embeddings. HTTP: enforced when non-zero.
  std::size_t embed_dim = 64;
  /// Scripted only: mixed into hash-derived embeddings.
  std::uint64_t embed_seed = 0;
  /// Applied by the protocol to every chat request it builds.
  double temperature = 0.0;
  int max_tokens = 1024;

  /// Throws kInvalidConfig.
  void validate() const;

  /// `IDEATION_LLM_ENDPOINT` / `IDEATION_EMBED_ENDPOINT` fill empty endpoints.
  void apply_environment();

  /// Stable description used in report metadata.
  std::string identity() const;
};

/// One transport; implementations perform a single attempt per call and
/// report retryable failures as kTimeout or kTransport.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
  virtual std::vector<double> embed(std::string_view text) = 0;
};

/// Tag-keyed response templates for the scripted backend.
///
/// A request's tag is the first line of its last user message that starts
/// with an upper-case word followed by ':' (e.g. "IDEA: A2"). Lookup tries
/// the full "TAG: arg" key first, then "TAG:". Templates expand:
///   {arg}            text after the tag on the tag line
///   {section:NAME}   body between "[[NAME]]" and "[[/NAME]]" in the message
///   {hash}           16 hex digits of the request hash
///   {seed}           request seed, or 0
/// Unmatched requests get a hash-derived filler paragraph.
class Script {
 public:
  Script() = default;
  explicit Script(std::map<std::string, std::string> entries) : entries_(std::move(entries)) {}

  void set(std::string key, std::string response_template);
  const std::string* find(const std::string& tag, const std::string& arg) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Script file: one `{"tag": "...", "response": "..."}` record per line.
Script load_script(const std::filesystem::path& path);

/// Tag and argument of a request, as used by the scripted backend.
struct RequestTag {
  std::string tag;  // includes the trailing ':'; empty when absent
  std::string arg;
};
RequestTag extract_tag(const ChatRequest& request);

/// Contents of `[[name]] ... [[/name]]` in `text`, or nullopt.
std::optional<std::string> extract_section(std::string_view text, std::string_view name);

/// Stable 64-bit hash of system prompt, messages and seed.
std::uint64_t request_hash(const ChatRequest& request);

class ScriptedBackend final : public ChatBackend {
 public:
  ScriptedBackend(Script script, std::size_t embed_dim, std::uint64_t embed_seed);

  std::string complete(const ChatRequest& request) override;
  std::vector<double> embed(std::string_view text) override;

 private:
  Script script_;
  std::size_t embed_dim_;
  std::uint64_t embed_seed_;
};

/// OpenAI-compatible chat and embedding routes over plain HTTP.
class HttpBackend final : public ChatBackend {
 public:
  explicit HttpBackend(BackendConfig config);

  std::string complete(const ChatRequest& request) override;
  std::vector<double> embed(std::string_view text) override;

 private:
  BackendConfig config_;
};

struct GatewayCounters {
  std::atomic<std::uint64_t> chat_calls{0};
  std::atomic<std::uint64_t> embed_calls{0};
  std::atomic<std::uint64_t> attempts{0};
};

/// Request validation, retry with exponential backoff, and dimension checks
/// over a backend. Stateless per request apart from counters; concurrent
/// calls are allowed.
class LlmGateway {
 public:
  LlmGateway(BackendConfig config, std::shared_ptr<ChatBackend> backend);

  /// Non-empty completion text. Throws kInvalidRequest, kTimeout,
  /// kTransport (after max_retries + 1 attempts) or kEmptyCompletion.
  std::string chat(const ChatRequest& request);

  /// Throws kDimensionMismatch when the vector's dim differs from
  /// `expected_dim` (or from a non-zero config embed_dim).
  EmbeddingVector embed(std::string_view text, std::optional<std::size_t> expected_dim = {});

  const BackendConfig& config() const noexcept { return config_; }
  const GatewayCounters& counters() const noexcept { return counters_; }

 private:
  template <typename Call>
  auto with_retries(Call&& call) -> decltype(call());

  BackendConfig config_;
  std::shared_ptr<ChatBackend> backend_;
  GatewayCounters counters_;
};

/// Gateway for `config`: scripted (using `script`) or HTTP.
std::shared_ptr<LlmGateway> make_gateway(const BackendConfig& config, Script script = {});

}  // namespace ideation
