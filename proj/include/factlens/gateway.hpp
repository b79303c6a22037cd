#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "factlens/errors.hpp"
#include "factlens/prompts.hpp"

namespace factlens {

struct CompletionParams {
  std::string model_id;
  double temperature = 0.0;
  int max_tokens = 1024;
};

struct Completion {
  std::string text;
  bool from_cache = false;
  std::string backend_id;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual const std::string& id() const = 0;
  // Returns the completion text. Throws TransientBackendError for
  // retryable failures, BackendError otherwise.
  virtual std::string complete(const PromptMessages& prompt, const CompletionParams& params) = 0;
};

// Deterministic offline backend. Recognizes the pipeline's own prompt
// families (impact, aggregation, judge) and answers each with a fixed
// well-formed response; anything else gets a deterministic echo.
class MockChatBackend final : public ChatBackend {
 public:
  const std::string& id() const override { return id_; }
  std::string complete(const PromptMessages& prompt, const CompletionParams& params) override;

  // Number of complete() calls served so far (cache hits never reach
  // the backend).
  int call_count() const { return calls_.load(); }

 private:
  std::string id_ = "mock";
  std::atomic<int> calls_{0};
};

struct ChatEndpoint {
  std::string base_url;
  std::string api_key;  // empty: no Authorization header
};

// HTTP chat client. POSTs {"model", "messages", "temperature",
// "max_tokens"} to <base_url>/v1/chat/completions and returns
// choices[0].message.content. HTTP 429/5xx and transport failures are
// transient; other failures are permanent.
class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(ChatEndpoint endpoint);

  const std::string& id() const override { return id_; }
  std::string complete(const PromptMessages& prompt, const CompletionParams& params) override;

 private:
  ChatEndpoint endpoint_;
  std::string id_;
};

// Content-addressed completion store: one file per key under `dir`,
// written via temp file + rename. Safe for concurrent readers/writers.
class CompletionCache {
 public:
  explicit CompletionCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, std::string_view text);

 private:
  std::filesystem::path dir_;
};

// SHA-256 over a canonical serialization of the request: every message
// role and content plus model_id, temperature, and max_tokens. Any
// change to any of these changes the key.
std::string cache_key(const PromptMessages& prompt, const CompletionParams& params);

struct RetryPolicy {
  int retries = 2;  // extra attempts after the first failure
  std::chrono::milliseconds initial_backoff{50};
};

// Cache-first completion. On a miss, calls the backend, retrying
// transient failures per `retry` with exponential backoff, and stores
// the result. Exhausted retries surface as BackendError carrying the
// last cause.
Completion complete(ChatBackend& backend, const PromptMessages& prompt,
                    const CompletionParams& params, CompletionCache& cache,
                    const RetryPolicy& retry = {});

}  // namespace factlens
