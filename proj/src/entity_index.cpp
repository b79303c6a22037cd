#include "factlens/entity_index.hpp"

#include <cinttypes>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "factlens/jsonl.hpp"
#include "factlens/scoring.hpp"

namespace factlens {

namespace {

// Entity text fed to the embedding provider is capped so one huge
// description cannot blow up a remote request.
constexpr std::size_t kMaxEmbedChars = 2048;

std::string embed_text(const Entity& entity) {
  std::string text = entity.name + ": " + entity.description;
  if (text.size() > kMaxEmbedChars) {
    text.resize(kMaxEmbedChars);
  }
  return text;
}

void check_unique_ids(const std::vector<Entity>& entities) {
  std::unordered_set<std::string> seen;
  for (const Entity& e : entities) {
    if (!seen.insert(e.id).second) {
      throw DuplicateEntityIdError("entity id '" + e.id + "' appears more than once");
    }
  }
}

// 17 significant digits: parses back to the identical double.
void append_double(std::string& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  out += buf;
}

}  // namespace

std::vector<Entity> load_entities(const std::filesystem::path& path) {
  std::vector<jsonl::json> records = jsonl::read_file(path);
  std::vector<Entity> entities;
  entities.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const jsonl::json& rec = records[i];
    Entity e;
    auto field = [&](const char* key) -> std::string {
      if (!rec.contains(key) || !rec.at(key).is_string()) {
        return {};
      }
      return rec.at(key).get<std::string>();
    };
    e.id = field("id");
    e.name = field("name");
    e.description = field("description");
    e.source = field("source");
    if (e.id.empty() || e.name.empty() || e.description.empty()) {
      throw BadEntityError(path.string() + " record " + std::to_string(i + 1) +
                           " needs non-empty id, name, and description");
    }
    entities.push_back(std::move(e));
  }
  check_unique_ids(entities);
  return entities;
}

EntityIndex build_index(std::vector<Entity> entities, EmbeddingProvider& provider) {
  check_unique_ids(entities);
  EntityIndex index;
  index.dim = provider.dim();
  index.provider_fingerprint = provider.fingerprint();
  index.entities = std::move(entities);
  index.matrix.resize(index.entities.size() * index.dim);

  std::vector<std::string> texts;
  texts.reserve(index.entities.size());
  for (const Entity& e : index.entities) {
    texts.push_back(embed_text(e));
  }
  std::vector<std::vector<double>> vectors = provider.embed_batch(texts);
  if (vectors.size() != index.entities.size()) {
    throw ProviderError("provider returned " + std::to_string(vectors.size()) +
                        " vectors for " + std::to_string(index.entities.size()) + " texts");
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    std::vector<double>& v = vectors[i];
    if (v.size() != index.dim) {
      throw ProviderError("vector for entity '" + index.entities[i].id + "' has dim " +
                          std::to_string(v.size()) + ", expected " + std::to_string(index.dim));
    }
    double norm = l2_norm(v);
    if (norm == 0.0) {
      throw ProviderError("vector for entity '" + index.entities[i].id + "' has zero norm");
    }
    double* row = index.matrix.data() + i * index.dim;
    for (std::size_t c = 0; c < index.dim; ++c) {
      row[c] = v[c] / norm;
    }
  }
  return index;
}

void save_index(const EntityIndex& index, const std::filesystem::path& path) {
  jsonl::json header{{"provider_fingerprint", index.provider_fingerprint},
                     {"dim", index.dim},
                     {"count", index.size()}};
  std::string out = header.dump();
  out += '\n';
  for (std::size_t i = 0; i < index.size(); ++i) {
    out += "{\"id\":";
    out += jsonl::json(index.entities[i].id).dump();
    out += ",\"vector\":[";
    std::span<const double> row = index.vector_at(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != 0) {
        out += ',';
      }
      append_double(out, row[c]);
    }
    out += "]}\n";
  }
  jsonl::write_text_atomic(path, out);
}

EntityIndex load_index(const std::filesystem::path& path, std::vector<Entity> corpus) {
  std::vector<jsonl::json> records = jsonl::read_file(path);
  if (records.empty()) {
    throw BadIndexFileError(path.string() + " has no header record");
  }
  const jsonl::json& header = records.front();
  if (!header.contains("provider_fingerprint") || !header.contains("dim") ||
      !header.contains("count")) {
    throw BadIndexFileError(path.string() +
                            " header needs provider_fingerprint, dim, and count");
  }
  EntityIndex index;
  index.provider_fingerprint = header.at("provider_fingerprint").get<std::string>();
  index.dim = header.at("dim").get<std::size_t>();
  std::size_t count = header.at("count").get<std::size_t>();
  if (index.dim == 0) {
    throw BadIndexFileError(path.string() + " header has dim 0");
  }
  if (records.size() - 1 != count) {
    throw BadIndexFileError(path.string() + " header says count " + std::to_string(count) +
                            " but file has " + std::to_string(records.size() - 1) + " records");
  }

  std::unordered_map<std::string, const Entity*> by_id;
  for (const Entity& e : corpus) {
    by_id[e.id] = &e;
  }
  std::unordered_set<std::string> seen;
  index.entities.reserve(count);
  index.matrix.resize(count * index.dim);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const jsonl::json& rec = records[i];
    if (!rec.contains("id") || !rec.contains("vector")) {
      throw BadIndexFileError(path.string() + " record " + std::to_string(i) +
                              " needs id and vector");
    }
    std::string id = rec.at("id").get<std::string>();
    if (!seen.insert(id).second) {
      throw BadIndexFileError(path.string() + " stores id '" + id + "' twice");
    }
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw BadIndexFileError(path.string() + " stores id '" + id +
                              "' which is not in the entity corpus");
    }
    std::vector<double> vec = rec.at("vector").get<std::vector<double>>();
    if (vec.size() != index.dim) {
      throw BadIndexFileError(path.string() + " record " + std::to_string(i) + " has dim " +
                              std::to_string(vec.size()) + ", header says " +
                              std::to_string(index.dim));
    }
    double* row = index.matrix.data() + (i - 1) * index.dim;
    for (std::size_t c = 0; c < index.dim; ++c) {
      row[c] = vec[c];
    }
    index.entities.push_back(*it->second);
  }
  return index;
}

std::vector<FactEntityPair> retrieve_top_k(const EntityIndex& index,
                                           const FactStatement& fact,
                                           const RetrievalConfig& config,
                                           EmbeddingProvider& provider) {
  if (provider.fingerprint() != index.provider_fingerprint) {
    throw FingerprintMismatchError("index was built with '" + index.provider_fingerprint +
                                   "' but the provider is '" + provider.fingerprint() + "'");
  }
  if (index.size() == 0 || config.k == 0) {
    return {};
  }
  std::vector<double> query = provider.embed(fact.text);
  if (query.size() != index.dim) {
    throw ProviderError("query vector has dim " + std::to_string(query.size()) +
                        ", index has " + std::to_string(index.dim));
  }
  double norm = l2_norm(query);
  if (norm == 0.0) {
    throw ZeroVectorError("query embeds to a zero vector");
  }
  for (double& x : query) {
    x /= norm;
  }

  std::vector<double> scores(index.size());
  cosine_scores_parallel(index.matrix, index.size(), index.dim, query, scores);

  std::vector<std::string> ids;
  ids.reserve(index.size());
  for (const Entity& e : index.entities) {
    ids.push_back(e.id);
  }
  std::vector<std::size_t> best = top_k_indices(scores, ids, config.k);

  std::vector<FactEntityPair> pairs;
  pairs.reserve(best.size());
  for (std::size_t i : best) {
    if (config.min_score && scores[i] < *config.min_score) {
      continue;
    }
    pairs.push_back(FactEntityPair{fact, index.entities[i], scores[i]});
  }
  return pairs;
}

}  // namespace factlens
