#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factlens/embedding.hpp"
#include "factlens/errors.hpp"
#include "factlens/factgate.hpp"

namespace factlens {

struct Entity {
  std::string id;
  std::string name;
  std::string description;
  std::string source;
};

// Reads one entity per line: {"id", "name", "description", "source"?}.
// Throws BadEntityError on missing/empty id, name, or description and
// DuplicateEntityIdError on repeated ids.
std::vector<Entity> load_entities(const std::filesystem::path& path);

// Embeddings for a fixed entity set. `matrix` holds one unit vector per
// entity, row-major, in entity order.
struct EntityIndex {
  std::vector<Entity> entities;
  std::vector<double> matrix;
  std::size_t dim = 0;
  std::string provider_fingerprint;

  std::size_t size() const { return entities.size(); }
  std::span<const double> vector_at(std::size_t i) const {
    return {matrix.data() + i * dim, dim};
  }
};

// Embeds "name: description" for every entity (batched through the
// provider). Throws DuplicateEntityIdError on repeated ids and
// ProviderError if the provider returns a wrong-dimension vector.
EntityIndex build_index(std::vector<Entity> entities, EmbeddingProvider& provider);

// File format: a header line {"provider_fingerprint", "dim", "count"}
// followed by one {"id", "vector"} line per entity. Vector components
// round-trip exactly.
void save_index(const EntityIndex& index, const std::filesystem::path& path);

// Rejoins stored vectors with `corpus` by id; every stored id must be
// present in the corpus. Throws BadIndexFileError on malformed files.
EntityIndex load_index(const std::filesystem::path& path, std::vector<Entity> corpus);

struct RetrievalConfig {
  std::size_t k = 3;
  std::optional<double> min_score;  // keep scores >= min_score only
};

struct FactEntityPair {
  FactStatement fact;
  Entity entity;
  double score = 0.0;
};

// Exhaustive exact cosine retrieval: scores every entity, returns the
// top k ordered by score descending, ties by entity id ascending.
// Throws FingerprintMismatchError when the provider does not match the
// index.
std::vector<FactEntityPair> retrieve_top_k(const EntityIndex& index,
                                           const FactStatement& fact,
                                           const RetrievalConfig& config,
                                           EmbeddingProvider& provider);

}  // namespace factlens
