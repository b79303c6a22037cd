#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "factlens/errors.hpp"

namespace factlens {

// 64-bit FNV-1a over the bytes of a token.
std::uint64_t fnv1a64(std::string_view bytes);

// Deterministic bag-of-words hashing embedding. Tokens are maximal runs
// of ASCII alphanumerics, lowercased; each token adds 1.0 to bucket
// fnv1a64(token) % d; the result is L2-normalized.
// Throws BadDimensionError if d < 8, EmptyTextError on empty input,
// ZeroVectorError when the text yields no tokens.
std::vector<double> test_embed(std::string_view text, std::size_t d);

double l2_norm(const std::vector<double>& v);
// Exact cosine in double precision; accumulates in index order.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  // Stable identity of the embedding space. Two providers with equal
  // fingerprints must produce interchangeable vectors.
  virtual const std::string& fingerprint() const = 0;
  virtual std::size_t dim() const = 0;

  // Throws EmptyTextError on empty/whitespace-only input.
  virtual std::vector<double> embed(const std::string& text) = 0;

  // Default: element-wise embed(). Overrides keep result order == input order.
  virtual std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts);
};

// Offline provider backed by test_embed.
class HashingProvider final : public EmbeddingProvider {
 public:
  explicit HashingProvider(std::size_t dim);

  const std::string& fingerprint() const override { return fingerprint_; }
  std::size_t dim() const override { return dim_; }
  std::vector<double> embed(const std::string& text) override;
  // Parallelized across texts; output order matches input order.
  std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) override;

 private:
  std::size_t dim_;
  std::string fingerprint_;
};

// Serves vectors recorded in an index-format file keyed by exact text.
// Unknown text throws ProviderError.
class PrecomputedProvider final : public EmbeddingProvider {
 public:
  explicit PrecomputedProvider(const std::string& path);

  const std::string& fingerprint() const override { return fingerprint_; }
  std::size_t dim() const override { return dim_; }
  std::vector<double> embed(const std::string& text) override;

 private:
  std::string fingerprint_;
  std::size_t dim_ = 0;
  std::vector<std::pair<std::string, std::vector<double>>> entries_;
};

struct RemoteEndpoint {
  std::string base_url;   // e.g. "http://localhost:8080"
  std::string model;
  int retries = 2;        // extra attempts after the first failure
  std::string api_key;    // empty: no Authorization header
};

// HTTP embeddings client. POSTs {"model", "input": [texts]} to
// <base_url>/v1/embeddings and expects {"data": [{"embedding": [...]}]}.
class RemoteProvider final : public EmbeddingProvider {
 public:
  RemoteProvider(RemoteEndpoint endpoint, std::size_t dim);

  const std::string& fingerprint() const override { return fingerprint_; }
  std::size_t dim() const override { return dim_; }
  std::vector<double> embed(const std::string& text) override;
  // One request for the whole batch.
  std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) override;

 private:
  RemoteEndpoint endpoint_;
  std::size_t dim_;
  std::string fingerprint_;
};

}  // namespace factlens
