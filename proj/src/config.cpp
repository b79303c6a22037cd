#include "factlens/config.hpp"

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "factlens/jsonl.hpp"

namespace factlens {

namespace {

using json = nlohmann::ordered_json;

std::string api_key_from_env() {
  const char* key = std::getenv("FACTLENS_API_KEY");
  return key == nullptr ? std::string() : std::string(key);
}

long long int_value(const json& node, const std::string& key) {
  if (!node.is_number_integer() && !node.is_number_unsigned()) {
    throw BadConfigError(key + " must be an integer");
  }
  return node.get<long long>();
}

std::string string_value(const json& node, const std::string& key) {
  if (!node.is_string()) {
    throw BadConfigError(key + " must be a string");
  }
  return node.get<std::string>();
}

}  // namespace

Config load_config(const std::optional<std::filesystem::path>& path) {
  Config cfg;
  if (!path) {
    return cfg;
  }
  json doc = json::parse(jsonl::read_text(*path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw BadConfigError(path->string() + " is not a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "provider") {
      cfg.provider = string_value(value, key);
    } else if (key == "model") {
      cfg.model = string_value(value, key);
    } else if (key == "base_url") {
      cfg.base_url = string_value(value, key);
    } else if (key == "dim") {
      long long v = int_value(value, key);
      if (v < 8) {
        throw BadConfigError("dim must be >= 8");
      }
      cfg.dim = static_cast<std::size_t>(v);
    } else if (key == "k") {
      long long v = int_value(value, key);
      if (v < 1) {
        throw BadConfigError("k must be >= 1");
      }
      cfg.k = static_cast<std::size_t>(v);
    } else if (key == "cache_dir") {
      cfg.cache_dir = string_value(value, key);
    } else if (key == "max_concurrency") {
      long long v = int_value(value, key);
      if (v < 1) {
        throw BadConfigError("max_concurrency must be >= 1");
      }
      cfg.max_concurrency = static_cast<std::size_t>(v);
    } else if (key == "retries") {
      long long v = int_value(value, key);
      if (v < 0) {
        throw BadConfigError("retries must be >= 0");
      }
      cfg.retries = static_cast<int>(v);
    } else if (key == "temperature") {
      if (!value.is_number()) {
        throw BadConfigError("temperature must be a number");
      }
      cfg.temperature = value.get<double>();
      if (cfg.temperature < 0.0) {
        throw BadConfigError("temperature must be >= 0");
      }
    } else if (key == "max_tokens") {
      long long v = int_value(value, key);
      if (v < 1) {
        throw BadConfigError("max_tokens must be >= 1");
      }
      cfg.max_tokens = static_cast<int>(v);
    } else if (key == "best_effort") {
      if (!value.is_boolean()) {
        throw BadConfigError("best_effort must be a boolean");
      }
      cfg.best_effort = value.get<bool>();
    } else if (key == "gain_variant") {
      std::string v = string_value(value, key);
      if (v == "linear") {
        cfg.gain_variant = GainVariant::Linear;
      } else if (v == "exponential") {
        cfg.gain_variant = GainVariant::Exponential;
      } else {
        throw BadConfigError("gain_variant must be \"linear\" or \"exponential\"");
      }
    } else {
      throw BadConfigError("unknown key '" + key + "' in " + path->string());
    }
  }
  if (cfg.provider.empty()) {
    throw BadConfigError("provider must be non-empty");
  }
  return cfg;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const Config& config) {
  if (config.provider == "mock") {
    return std::make_unique<HashingProvider>(config.dim);
  }
  static const std::string kPrecomputed = "precomputed:";
  if (config.provider.rfind(kPrecomputed, 0) == 0) {
    std::string file = config.provider.substr(kPrecomputed.size());
    if (file.empty()) {
      throw BadConfigError("precomputed provider needs a file: precomputed:<path>");
    }
    return std::make_unique<PrecomputedProvider>(file);
  }
  if (config.provider == "remote") {
    if (config.base_url.empty()) {
      throw BadConfigError("base_url is required for the remote provider");
    }
    RemoteEndpoint endpoint;
    endpoint.base_url = config.base_url;
    endpoint.model = config.model;
    endpoint.retries = config.retries;
    endpoint.api_key = api_key_from_env();
    return std::make_unique<RemoteProvider>(std::move(endpoint), config.dim);
  }
  throw BadConfigError("unknown provider '" + config.provider + "'");
}

std::unique_ptr<ChatBackend> make_chat_backend(const Config& config) {
  if (config.provider == "mock" || config.provider.rfind("precomputed:", 0) == 0) {
    return std::make_unique<MockChatBackend>();
  }
  if (config.provider == "remote") {
    if (config.base_url.empty()) {
      throw BadConfigError("base_url is required for the remote provider");
    }
    ChatEndpoint endpoint;
    endpoint.base_url = config.base_url;
    endpoint.api_key = api_key_from_env();
    return std::make_unique<HttpChatBackend>(std::move(endpoint));
  }
  throw BadConfigError("unknown provider '" + config.provider + "'");
}

CompletionParams completion_params(const Config& config) {
  return CompletionParams{config.model, config.temperature, config.max_tokens};
}

RetryPolicy retry_policy(const Config& config) {
  RetryPolicy policy;
  policy.retries = config.retries;
  return policy;
}

}  // namespace factlens
