// HTTP-backed provider and chat backend. This is the only translation
// unit that pulls in httplib.

#include <chrono>
#include <thread>
#include <utility>

#ifdef FACTLENS_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "factlens/embedding.hpp"
#include "factlens/gateway.hpp"

namespace factlens {

namespace {

using json = nlohmann::ordered_json;

bool transient_status(int status) { return status == 429 || (status >= 500 && status < 600); }

httplib::Headers auth_headers(const std::string& api_key) {
  httplib::Headers headers;
  if (!api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key);
  }
  return headers;
}

struct HttpOutcome {
  bool ok = false;
  bool transient = false;
  int status = 0;
  std::string body;
  std::string detail;
};

HttpOutcome post_json(const std::string& base_url, const std::string& path,
                      const std::string& api_key, const json& payload) {
  httplib::Client client(base_url);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(std::chrono::seconds(120));
  auto res = client.Post(path, auth_headers(api_key), payload.dump(), "application/json");
  HttpOutcome outcome;
  if (!res) {
    outcome.transient = true;
    outcome.detail = "transport failure: " + httplib::to_string(res.error());
    return outcome;
  }
  outcome.status = res->status;
  outcome.body = res->body;
  if (res->status == 200) {
    outcome.ok = true;
  } else {
    outcome.transient = transient_status(res->status);
    outcome.detail = "HTTP " + std::to_string(res->status);
  }
  return outcome;
}

void backoff_sleep(int attempt, std::chrono::milliseconds initial) {
  std::this_thread::sleep_for(initial * (1 << attempt));
}

}  // namespace

RemoteProvider::RemoteProvider(RemoteEndpoint endpoint, std::size_t dim)
    : endpoint_(std::move(endpoint)), dim_(dim) {
  if (dim_ < 8) {
    throw BadDimensionError("embedding dimension must be >= 8, got " + std::to_string(dim_));
  }
  if (endpoint_.base_url.empty()) {
    throw ProviderError("remote provider needs a base_url");
  }
  fingerprint_ = "remote:" + endpoint_.model + ":d" + std::to_string(dim_);
}

std::vector<double> RemoteProvider::embed(const std::string& text) {
  return embed_batch({text}).front();
}

std::vector<std::vector<double>> RemoteProvider::embed_batch(
    const std::vector<std::string>& texts) {
  for (const std::string& text : texts) {
    if (text.find_first_not_of(" \t\n\r\f\v") == std::string::npos) {
      throw EmptyTextError("cannot embed empty text");
    }
  }
  if (texts.empty()) {
    return {};
  }
  json payload{{"model", endpoint_.model}, {"input", texts}};
  std::string last_detail;
  for (int attempt = 0; attempt <= endpoint_.retries; ++attempt) {
    if (attempt > 0) {
      backoff_sleep(attempt - 1, std::chrono::milliseconds(50));
    }
    HttpOutcome outcome =
        post_json(endpoint_.base_url, "/v1/embeddings", endpoint_.api_key, payload);
    if (!outcome.ok) {
      if (!outcome.transient) {
        throw ProviderError("embeddings request failed: " + outcome.detail);
      }
      last_detail = outcome.detail;
      continue;
    }
    json reply = json::parse(outcome.body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("data") || !reply.at("data").is_array() ||
        reply.at("data").size() != texts.size()) {
      throw ProviderError("embeddings response is malformed");
    }
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const json& item : reply.at("data")) {
      if (!item.contains("embedding")) {
        throw ProviderError("embeddings response item is missing 'embedding'");
      }
      std::vector<double> vec = item.at("embedding").get<std::vector<double>>();
      if (vec.size() != dim_) {
        throw ProviderError("embeddings response has dim " + std::to_string(vec.size()) +
                            ", expected " + std::to_string(dim_));
      }
      out.push_back(std::move(vec));
    }
    return out;
  }
  throw ProviderError("embeddings request failed after " +
                      std::to_string(endpoint_.retries + 1) + " attempts; last: " + last_detail);
}

HttpChatBackend::HttpChatBackend(ChatEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.base_url.empty()) {
    throw BackendError("chat backend needs a base_url");
  }
  id_ = "http:" + endpoint_.base_url;
}

std::string HttpChatBackend::complete(const PromptMessages& prompt,
                                      const CompletionParams& params) {
  json messages = json::array();
  for (const Message& m : prompt.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  json payload{{"model", params.model_id},
               {"messages", messages},
               {"temperature", params.temperature},
               {"max_tokens", params.max_tokens}};
  HttpOutcome outcome =
      post_json(endpoint_.base_url, "/v1/chat/completions", endpoint_.api_key, payload);
  if (!outcome.ok) {
    if (outcome.transient) {
      throw TransientBackendError("chat request failed: " + outcome.detail);
    }
    throw BackendError("chat request failed: " + outcome.detail);
  }
  json reply = json::parse(outcome.body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") || !reply.at("choices").is_array() ||
      reply.at("choices").empty()) {
    throw BackendError("chat response is malformed");
  }
  const json& first = reply.at("choices").front();
  if (!first.contains("message") || !first.at("message").contains("content") ||
      !first.at("message").at("content").is_string()) {
    throw BackendError("chat response is missing message content");
  }
  return first.at("message").at("content").get<std::string>();
}

}  // namespace factlens
