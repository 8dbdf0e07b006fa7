#include <httplib.h>

#include <nlohmann/json.hpp>

#include "ideation/error.hpp"
#include "ideation/llm_gateway.hpp"

namespace ideation {

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url parse_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw Error(ErrorCode::kInvalidConfig, "only http:// endpoints are supported: '" + url + "'");
  }
  const std::size_t slash = url.find('/', scheme.size());
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

nlohmann::json post_json(const BackendConfig& config, const std::string& url, const nlohmann::json& body) {
  const Url target = parse_url(url);
  httplib::Client client(target.origin);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  auto result = client.Post(target.path, body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    const std::string what = httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
        err == httplib::Error::Write) {
      throw Error(ErrorCode::kTimeout, url + ": " + what);
    }
    throw Error(ErrorCode::kTransport, url + ": " + what);
  }
  if (result->status >= 500 || result->status == 429) {
    throw Error(ErrorCode::kTransport, url + ": HTTP " + std::to_string(result->status));
  }
  if (result->status >= 400) {
    throw Error(ErrorCode::kInvalidRequest,
                url + ": HTTP " + std::to_string(result->status) + " " + result->body);
  }
  try {
    return nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kTransport, url + ": unparsable response body: " + e.what());
  }
}

}  // namespace

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
  parse_url(config_.endpoint);
  if (!config_.embed_endpoint.empty()) parse_url(config_.embed_endpoint);
}

std::string HttpBackend::complete(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  if (!request.system_prompt.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
  }
  for (const auto& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  nlohmann::json body = {{"model", config_.model_name},
                         {"messages", std::move(messages)},
                         {"temperature", request.temperature},
                         {"max_tokens", request.max_tokens},
                         {"stream", false}};
  if (request.seed) body["seed"] = *request.seed;

  const auto reply = post_json(config_, config_.endpoint, body);
  try {
    if (reply.contains("choices")) return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    if (reply.contains("message")) return reply.at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransport, std::string("malformed chat response: ") + e.what());
  }
  throw Error(ErrorCode::kTransport, "chat response has neither 'choices' nor 'message'");
}

std::vector<double> HttpBackend::embed(std::string_view text) {
  if (config_.embed_endpoint.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no embedding endpoint configured");
  }
  const nlohmann::json body = {{"model", config_.embed_model_name}, {"input", std::string(text)}};
  const auto reply = post_json(config_, config_.embed_endpoint, body);
  try {
    if (reply.contains("data")) return reply.at("data").at(0).at("embedding").get<std::vector<double>>();
    if (reply.contains("embeddings")) return reply.at("embeddings").at(0).get<std::vector<double>>();
    if (reply.contains("embedding")) return reply.at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransport, std::string("malformed embedding response: ") + e.what());
  }
  throw Error(ErrorCode::kTransport, "embedding response has no vector");
}

}  // namespace ideation
