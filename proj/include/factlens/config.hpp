#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "factlens/embedding.hpp"
#include "factlens/errors.hpp"
#include "factlens/evaluator.hpp"
#include "factlens/gateway.hpp"

namespace factlens {

// Runtime settings. The API key is never part of the file; it is read
// from the FACTLENS_API_KEY environment variable.
struct Config {
  std::string provider = "mock";  // "mock" | "remote" | "precomputed:<path>"
  std::string model = "mock-chat";
  std::string base_url;
  std::size_t dim = 256;
  std::size_t k = 3;
  std::string cache_dir = ".factlens-cache";
  std::size_t max_concurrency = 4;
  int retries = 2;
  double temperature = 0.0;
  int max_tokens = 1024;
  bool best_effort = false;
  GainVariant gain_variant = GainVariant::Linear;
};

// Loads a JSON config file; absent path means all defaults. Unknown
// keys, wrong types, and out-of-domain values throw BadConfigError
// naming the offending key.
Config load_config(const std::optional<std::filesystem::path>& path);

// Provider wiring. "mock" pairs hashing embeddings with the mock chat
// backend; "remote" uses the HTTP clients against base_url;
// "precomputed:<path>" replays recorded embeddings with the mock chat
// backend.
std::unique_ptr<EmbeddingProvider> make_embedding_provider(const Config& config);
std::unique_ptr<ChatBackend> make_chat_backend(const Config& config);

CompletionParams completion_params(const Config& config);
RetryPolicy retry_policy(const Config& config);

}  // namespace factlens
