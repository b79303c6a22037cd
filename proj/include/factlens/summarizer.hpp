#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "factlens/entity_index.hpp"
#include "factlens/gateway.hpp"

namespace factlens {

struct ImpactSummary {
  FactEntityPair pair;
  std::string text;
  std::string model_id;
};

struct ArticleSummary {
  std::string article_id;
  std::string text;
  // Deduplicated entity names, ordered by first appearance across the
  // pair summaries.
  std::vector<std::string> impacted_companies;
  std::vector<ImpactSummary> pair_summaries;
};

struct PipelineTimings {
  double extract_ms = 0.0;
  double retrieve_ms = 0.0;
  double summarize_ms = 0.0;
  double aggregate_ms = 0.0;
};

struct PipelineResult {
  Article article;
  std::vector<FactStatement> facts;
  std::vector<FactEntityPair> pairs;
  ArticleSummary summary;
  PipelineTimings timings;
  int completions = 0;  // backend-or-cache completions requested
  int cache_hits = 0;
  bool no_facts = false;  // no Fact sentences: summary is empty by design
  std::vector<std::string> warnings;
};

struct PipelineOptions {
  std::size_t max_concurrency = 4;
  // Keep going when a single pair summary fails; failures become
  // warnings instead of aborting the run.
  bool best_effort = false;
  // Aggregation batches summaries so no rendered prompt exceeds this.
  std::size_t max_prompt_chars = 48000;
  RetryPolicy retry{};
};

// One impact summary for one (fact, entity) pair.
ImpactSummary summarize_pair(const FactEntityPair& pair, ChatBackend& backend,
                             const CompletionParams& params, CompletionCache& cache,
                             const RetryPolicy& retry = {});

// Combines pair summaries into the article-level summary. Batches
// hierarchically when the flat prompt would exceed the budget.
// Throws NoSummariesError on empty input.
ArticleSummary aggregate(const std::string& article_id, std::vector<ImpactSummary> summaries,
                         ChatBackend& backend, const CompletionParams& params,
                         CompletionCache& cache, const PipelineOptions& options = {});

// Full run: extract facts, retrieve top-k entities per fact, summarize
// each pair (bounded concurrency, deterministic output order), then
// aggregate. An article with no facts short-circuits to an empty
// summary without touching the backend. Stage failures abort with
// PipelineStageError naming the stage, unless best_effort downgrades a
// pair failure to a warning.
PipelineResult run_pipeline(const Article& article, const MarkerLexicon& lexicon,
                            const EntityIndex& index, const RetrievalConfig& retrieval,
                            ChatBackend& backend, const CompletionParams& params,
                            CompletionCache& cache, EmbeddingProvider& provider,
                            const PipelineOptions& options = {});

}  // namespace factlens
