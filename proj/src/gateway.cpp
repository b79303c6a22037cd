#include "factlens/gateway.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>
#include <vector>

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

namespace factlens {

namespace {

using json = nlohmann::ordered_json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw CacheIOError("SHA-256 digest failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(static_cast<std::size_t>(len) * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

void validate_request(const PromptMessages& prompt, const CompletionParams& params) {
  if (prompt.messages.empty()) {
    throw BackendError("prompt has no messages");
  }
  if (prompt.messages.front().role == Role::Assistant) {
    throw BackendError("prompt must start with a system or user message");
  }
  for (const Message& m : prompt.messages) {
    if (m.content.empty()) {
      throw BackendError("prompt contains an empty message");
    }
  }
  if (params.model_id.empty()) {
    throw BackendError("params.model_id is empty");
  }
  if (params.temperature < 0.0) {
    throw BackendError("params.temperature is negative");
  }
  if (params.max_tokens < 1) {
    throw BackendError("params.max_tokens must be >= 1");
  }
}

// Deterministic mock answers, keyed off the prompt families the
// pipeline renders. Routing looks only at distinctive instruction
// fragments so spliced article text cannot misroute a prompt.
std::string mock_answer(const PromptMessages& prompt) {
  const std::string* content = nullptr;
  for (auto it = prompt.messages.rbegin(); it != prompt.messages.rend(); ++it) {
    if (it->role == Role::User) {
      content = &it->content;
      break;
    }
  }
  if (content == nullptr) {
    content = &prompt.messages.back().content;
  }
  const std::string& text = *content;

  if (text.find("You will be given one summary written for a news article.") !=
      std::string::npos) {
    if (text.find("as a percentage from 0% to 100%") != std::string::npos) {
      return "Accuracy: 90%\nConciseness: 80%\nFluency: 90%\nEngagement: 85%";
    }
    return "Factfulness: 4\nConciseness: 4\nUsefulness: 4";
  }

  if (text.find("list every company that has been impacted by the news") !=
      std::string::npos) {
    std::vector<std::string> names;
    auto add_name = [&names](std::string name) {
      if (name.empty() || name == "none identified") {
        return;
      }
      for (const std::string& existing : names) {
        if (existing == name) {
          return;
        }
      }
      names.push_back(std::move(name));
    };
    static const std::string kNoteTag = "Impact note for ";
    std::size_t pos = 0;
    while ((pos = text.find(kNoteTag, pos)) != std::string::npos) {
      std::size_t begin = pos + kNoteTag.size();
      std::size_t colon = text.find(':', begin);
      if (colon == std::string::npos) {
        break;
      }
      add_name(text.substr(begin, colon - begin));
      pos = colon;
    }
    // carries company lists through a second aggregation round: group
    // answers end with this same tag and no trailing punctuation
    static const std::string kListTag = "Companies impacted by the news: ";
    pos = 0;
    while ((pos = text.find(kListTag, pos)) != std::string::npos) {
      std::size_t begin = pos + kListTag.size();
      std::size_t end = text.find('\n', begin);
      if (end == std::string::npos) {
        end = text.size();
      }
      std::size_t item = begin;
      while (item < end) {
        std::size_t sep = text.find("; ", item);
        std::size_t stop = (sep == std::string::npos || sep > end) ? end : sep;
        add_name(text.substr(item, stop - item));
        if (stop == end) {
          break;
        }
        item = stop + 2;
      }
      pos = end;
    }
    std::string out =
        "The combined analyses describe the article's main topic and its market "
        "consequences, carrying over the relevant facts and figures from the "
        "individual impact notes. Companies impacted by the news: ";
    if (names.empty()) {
      out += "none identified";
    } else {
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i != 0) {
          out += "; ";
        }
        out += names[i];
      }
    }
    return out;
  }

  static const std::string kCompanyTag = "Consider the company ";
  std::size_t company = text.find(kCompanyTag);
  if (company != std::string::npos) {
    std::size_t begin = company + kCompanyTag.size();
    std::size_t end = text.find(", which is described as", begin);
    if (end != std::string::npos) {
      std::string name = text.substr(begin, end - begin);
      return "Impact note for " + name +
             ": the reported development may bear on the company's operations, "
             "sentiment, and near-term outlook; the exposure follows from the cited "
             "factual statement.";
    }
  }

  return "Echo: " + text.substr(0, 160);
}

}  // namespace

std::string MockChatBackend::complete(const PromptMessages& prompt,
                                      const CompletionParams& params) {
  (void)params;
  calls_.fetch_add(1, std::memory_order_relaxed);
  return mock_answer(prompt);
}

CompletionCache::CompletionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw CacheIOError("cannot create cache directory " + dir_.string() + ": " +
                       ec.message());
  }
}

std::optional<std::string> CompletionCache::get(const std::string& key) const {
  std::filesystem::path file = dir_ / (key + ".txt");
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    if (std::filesystem::exists(file)) {
      throw CacheIOError("cannot read cache entry " + file.string());
    }
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void CompletionCache::put(const std::string& key, std::string_view text) {
  static std::atomic<unsigned long long> counter{0};
  std::filesystem::path file = dir_ / (key + ".txt");
  std::filesystem::path tmp =
      dir_ / (key + ".tmp." +
              std::to_string(counter.fetch_add(1, std::memory_order_relaxed)) + "." +
              std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) %
                             100000));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw CacheIOError("cannot open " + tmp.string() + " for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
      throw CacheIOError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw CacheIOError("cannot publish cache entry " + file.string() + ": " + ec.message());
  }
}

std::string cache_key(const PromptMessages& prompt, const CompletionParams& params) {
  json canon;
  json messages = json::array();
  for (const Message& m : prompt.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  canon["messages"] = std::move(messages);
  canon["model_id"] = params.model_id;
  canon["temperature"] = params.temperature;
  canon["max_tokens"] = params.max_tokens;
  return sha256_hex(canon.dump());
}

Completion complete(ChatBackend& backend, const PromptMessages& prompt,
                    const CompletionParams& params, CompletionCache& cache,
                    const RetryPolicy& retry) {
  validate_request(prompt, params);
  std::string key = cache_key(prompt, params);
  if (std::optional<std::string> hit = cache.get(key)) {
    return Completion{std::move(*hit), true, backend.id()};
  }
  std::string last_cause;
  for (int attempt = 0; attempt <= retry.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(retry.initial_backoff * (1 << (attempt - 1)));
    }
    std::string text;
    try {
      text = backend.complete(prompt, params);
    } catch (const TransientBackendError& e) {
      last_cause = e.what();
      continue;
    }
    if (text.empty()) {
      throw BackendError("backend '" + backend.id() + "' returned an empty completion");
    }
    cache.put(key, text);
    return Completion{std::move(text), false, backend.id()};
  }
  throw BackendError("no completion after " + std::to_string(retry.retries + 1) +
                     " attempts; last cause: " + last_cause);
}

}  // namespace factlens
