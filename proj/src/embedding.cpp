#include "factlens/embedding.hpp"

#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "factlens/jsonl.hpp"

namespace factlens {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

bool is_blank(std::string_view text) {
  return text.find_first_not_of(" \t\n\r\f\v") == std::string_view::npos;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

double l2_norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) {
    acc += x * x;
  }
  return std::sqrt(acc);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw BadDimensionError("cosine of vectors with dims " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
  }
  double na = l2_norm(a);
  double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw ZeroVectorError("cosine of a zero vector");
  }
  return dot / (na * nb);
}

std::vector<double> test_embed(std::string_view text, std::size_t d) {
  if (d < 8) {
    throw BadDimensionError("embedding dimension must be >= 8, got " + std::to_string(d));
  }
  if (is_blank(text)) {
    throw EmptyTextError("cannot embed empty text");
  }
  std::vector<double> v(d, 0.0);
  std::string token;
  bool any_token = false;
  auto flush = [&] {
    if (!token.empty()) {
      v[fnv1a64(token) % d] += 1.0;
      any_token = true;
      token.clear();
    }
  };
  for (char c : text) {
    if (is_ascii_alnum(c)) {
      token += ascii_lower(c);
    } else {
      flush();
    }
  }
  flush();
  if (!any_token) {
    throw ZeroVectorError("text has no alphanumeric tokens");
  }
  double norm = l2_norm(v);
  for (double& x : v) {
    x /= norm;
  }
  return v;
}

std::vector<std::vector<double>> EmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    out.push_back(embed(text));
  }
  return out;
}

HashingProvider::HashingProvider(std::size_t dim) : dim_(dim) {
  if (dim_ < 8) {
    throw BadDimensionError("embedding dimension must be >= 8, got " + std::to_string(dim_));
  }
  fingerprint_ = "test-embed:fnv1a64:d" + std::to_string(dim_);
}

std::vector<double> HashingProvider::embed(const std::string& text) {
  return test_embed(text, dim_);
}

std::vector<std::vector<double>> HashingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<double>> out(texts.size());
  std::vector<std::exception_ptr> errors(texts.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(texts.size()); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = test_embed(texts[static_cast<std::size_t>(i)], dim_);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  // lowest failing index wins, independent of scheduling
  for (const std::exception_ptr& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

PrecomputedProvider::PrecomputedProvider(const std::string& path) {
  std::vector<jsonl::json> records = jsonl::read_file(path);
  if (records.empty()) {
    throw ProviderError(path + " has no header record");
  }
  const jsonl::json& header = records.front();
  if (!header.contains("provider_fingerprint") || !header.contains("dim")) {
    throw ProviderError(path + " header is missing provider_fingerprint or dim");
  }
  fingerprint_ = header.at("provider_fingerprint").get<std::string>();
  dim_ = header.at("dim").get<std::size_t>();
  for (std::size_t i = 1; i < records.size(); ++i) {
    const jsonl::json& rec = records[i];
    if (!rec.contains("text") || !rec.contains("vector")) {
      throw ProviderError(path + " record " + std::to_string(i) + " is missing text or vector");
    }
    std::vector<double> vec = rec.at("vector").get<std::vector<double>>();
    if (vec.size() != dim_) {
      throw ProviderError(path + " record " + std::to_string(i) + " has dim " +
                          std::to_string(vec.size()) + ", header says " + std::to_string(dim_));
    }
    entries_.emplace_back(rec.at("text").get<std::string>(), std::move(vec));
  }
}

std::vector<double> PrecomputedProvider::embed(const std::string& text) {
  if (is_blank(text)) {
    throw EmptyTextError("cannot embed empty text");
  }
  for (const auto& [known, vec] : entries_) {
    if (known == text) {
      return vec;
    }
  }
  throw ProviderError("no precomputed vector for text: " + text.substr(0, 80));
}

}  // namespace factlens
