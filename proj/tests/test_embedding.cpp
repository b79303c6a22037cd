#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "factlens/embedding.hpp"

namespace {

// Independent mirror of the hashing scheme used to freeze the expected
// buckets below.
constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv_oracle(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

TEST_CASE("fnv1a64 matches the reference constants") {
  CHECK(factlens::fnv1a64("") == kFnvOffset);
  CHECK(factlens::fnv1a64("alpha") == 9999721509958787115ull);
  CHECK(factlens::fnv1a64("beta") == 8513880941419438247ull);
  CHECK(factlens::fnv1a64("alpha") == fnv_oracle("alpha"));
  CHECK(factlens::fnv1a64("token") == fnv_oracle("token"));
}

TEST_CASE("single tokens land in their hash bucket with weight one") {
  auto v = factlens::test_embed("alpha", 64);
  REQUIRE(v.size() == 64);
  CHECK(v[9999721509958787115ull % 64] == 1.0);  // bucket 43
  CHECK(v[43] == 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 43) {
      CHECK(v[i] == 0.0);
    }
  }

  auto w = factlens::test_embed("beta", 64);
  CHECK(w[8513880941419438247ull % 64] == 1.0);  // bucket 39
  CHECK(w[39] == 1.0);
}

TEST_CASE("tokenization lowercases and splits on non-alphanumerics") {
  // "Alpha, BETA!" and "alpha beta" must hash identically.
  CHECK(factlens::test_embed("Alpha, BETA!", 64) == factlens::test_embed("alpha beta", 64));
  CHECK(factlens::test_embed("x1 y2", 32) == factlens::test_embed("x1...y2", 32));
}

TEST_CASE("two-token overlap has the frozen cosine") {
  auto a = factlens::test_embed("alpha", 64);
  auto ab = factlens::test_embed("alpha beta", 64);
  CHECK(factlens::cosine_similarity(a, ab) == doctest::Approx(0.7071067811865475).epsilon(1e-12));
}

TEST_CASE("repeated tokens accumulate before normalization") {
  // "alpha alpha beta" puts weight 2 on alpha's bucket, 1 on beta's.
  auto v = factlens::test_embed("alpha alpha beta", 64);
  double expect_alpha = 2.0 / std::sqrt(5.0);
  double expect_beta = 1.0 / std::sqrt(5.0);
  CHECK(v[43] == doctest::Approx(expect_alpha).epsilon(1e-12));
  CHECK(v[39] == doctest::Approx(expect_beta).epsilon(1e-12));
}

TEST_CASE("embedding input errors") {
  CHECK_THROWS_AS(factlens::test_embed("", 64), factlens::EmptyTextError);
  CHECK_THROWS_AS(factlens::test_embed("!!! ... ---", 64), factlens::ZeroVectorError);
  CHECK_THROWS_AS(factlens::test_embed("alpha", 7), factlens::BadDimensionError);
  CHECK_NOTHROW(factlens::test_embed("alpha", 8));
}

TEST_CASE("cosine_similarity validates its inputs") {
  std::vector<double> a{1.0, 0.0};
  std::vector<double> b{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(factlens::cosine_similarity(a, b), factlens::BadDimensionError);
  std::vector<double> z{0.0, 0.0};
  CHECK_THROWS_AS(factlens::cosine_similarity(a, z), factlens::ZeroVectorError);
  CHECK(factlens::cosine_similarity(a, a) == 1.0);
}

TEST_CASE("hashing provider wraps test_embed") {
  factlens::HashingProvider provider(64);
  CHECK(provider.fingerprint() == "test-embed:fnv1a64:d64");
  CHECK(provider.dim() == 64);
  CHECK(provider.embed("alpha beta") == factlens::test_embed("alpha beta", 64));
}

TEST_CASE("batch embedding preserves order and equals per-item calls") {
  factlens::HashingProvider provider(32);
  std::vector<std::string> texts;
  for (int i = 0; i < 40; ++i) {
    texts.push_back("token" + std::to_string(i) + " filler words here");
  }
  auto batch = provider.embed_batch(texts);
  REQUIRE(batch.size() == texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    CHECK(batch[i] == provider.embed(texts[i]));
  }
}

TEST_CASE("batch errors surface the lowest failing index deterministically") {
  factlens::HashingProvider provider(32);
  std::vector<std::string> texts = {"fine", "also fine", "...", "fine again", ""};
  // Index 2 (ZeroVector) precedes index 4 (EmptyText); the batch must
  // report index 2's error no matter the thread schedule.
  CHECK_THROWS_AS(provider.embed_batch(texts), factlens::ZeroVectorError);
}

TEST_CASE("embeddings are unit-norm across random inputs") {
  std::mt19937 rng(91);
  std::uniform_int_distribution<int> n_tokens(1, 12);
  std::uniform_int_distribution<int> token_len(1, 10);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::uniform_int_distribution<int> dim_pick(0, 2);
  const std::size_t dims[] = {8, 64, 256};

  for (int iter = 0; iter < 600; ++iter) {
    std::string text;
    int n = n_tokens(rng);
    for (int t = 0; t < n; ++t) {
      if (t > 0) {
        text += ' ';
      }
      int len = token_len(rng);
      for (int c = 0; c < len; ++c) {
        text += static_cast<char>(letter(rng));
      }
    }
    auto v = factlens::test_embed(text, dims[dim_pick(rng)]);
    CHECK(std::abs(factlens::l2_norm(v) - 1.0) <= 1e-12);
  }
}
