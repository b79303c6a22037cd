#include "factlens/summarizer.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <set>
#include <thread>
#include <utility>

#include "factlens/prompts.hpp"

namespace factlens {

namespace {

struct CompletionTally {
  std::atomic<int> total{0};
  std::atomic<int> hits{0};
};

Completion tracked_complete(ChatBackend& backend, const PromptMessages& prompt,
                            const CompletionParams& params, CompletionCache& cache,
                            const RetryPolicy& retry, CompletionTally* tally) {
  Completion c = complete(backend, prompt, params, cache, retry);
  if (tally != nullptr) {
    tally->total.fetch_add(1, std::memory_order_relaxed);
    if (c.from_cache) {
      tally->hits.fetch_add(1, std::memory_order_relaxed);
    }
  }
  return c;
}

ImpactSummary summarize_pair_tracked(const FactEntityPair& pair, ChatBackend& backend,
                                     const CompletionParams& params, CompletionCache& cache,
                                     const RetryPolicy& retry, CompletionTally* tally) {
  PromptMessages prompt = render_impact_prompt(pair.fact, pair.entity);
  Completion c = tracked_complete(backend, prompt, params, cache, retry, tally);
  return ImpactSummary{pair, std::move(c.text), params.model_id};
}

std::size_t prompt_chars(const PromptMessages& prompt) {
  std::size_t total = 0;
  for (const Message& m : prompt.messages) {
    total += m.content.size();
  }
  return total;
}

std::vector<ImpactSummary> as_synthetic_summaries(const std::vector<std::string>& texts) {
  std::vector<ImpactSummary> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    ImpactSummary s;
    s.text = t;
    out.push_back(std::move(s));
  }
  return out;
}

// Combines summary texts into one completion, batching into groups and
// recursing whenever the flat prompt would blow the character budget.
// A single text that alone exceeds the budget is sent as-is: there is
// no smaller unit to split it into.
std::string combine_texts(const std::string& article_id, const std::vector<std::string>& texts,
                          ChatBackend& backend, const CompletionParams& params,
                          CompletionCache& cache, const PipelineOptions& options,
                          CompletionTally* tally) {
  PromptMessages flat = render_aggregation_prompt(article_id, as_synthetic_summaries(texts));
  if (texts.size() == 1 || prompt_chars(flat) <= options.max_prompt_chars) {
    return tracked_complete(backend, flat, params, cache, options.retry, tally).text;
  }
  std::vector<std::vector<std::string>> groups;
  std::vector<std::string> current;
  std::size_t current_chars = 0;
  // rendered instruction block plus per-summary framing, estimated high
  constexpr std::size_t kPromptOverhead = 800;
  constexpr std::size_t kPerSummaryOverhead = 16;
  for (const std::string& t : texts) {
    std::size_t cost = t.size() + kPerSummaryOverhead;
    if (!current.empty() && kPromptOverhead + current_chars + cost > options.max_prompt_chars) {
      groups.push_back(std::move(current));
      current.clear();
      current_chars = 0;
    }
    current.push_back(t);
    current_chars += cost;
  }
  if (!current.empty()) {
    groups.push_back(std::move(current));
  }
  if (groups.size() <= 1) {
    // budget too small to split further; fall through with one call
    return tracked_complete(backend, flat, params, cache, options.retry, tally).text;
  }
  std::vector<std::string> group_texts;
  group_texts.reserve(groups.size());
  for (const std::vector<std::string>& group : groups) {
    PromptMessages prompt =
        render_aggregation_prompt(article_id, as_synthetic_summaries(group));
    group_texts.push_back(
        tracked_complete(backend, prompt, params, cache, options.retry, tally).text);
  }
  return combine_texts(article_id, group_texts, backend, params, cache, options, tally);
}

ArticleSummary aggregate_tracked(const std::string& article_id,
                                 std::vector<ImpactSummary> summaries, ChatBackend& backend,
                                 const CompletionParams& params, CompletionCache& cache,
                                 const PipelineOptions& options, CompletionTally* tally) {
  if (summaries.empty()) {
    throw NoSummariesError("cannot aggregate zero impact summaries");
  }
  ArticleSummary result;
  result.article_id = article_id;
  for (const ImpactSummary& s : summaries) {
    bool seen = false;
    for (const std::string& name : result.impacted_companies) {
      if (name == s.pair.entity.name) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      result.impacted_companies.push_back(s.pair.entity.name);
    }
  }
  std::vector<std::string> texts;
  texts.reserve(summaries.size());
  for (const ImpactSummary& s : summaries) {
    texts.push_back(s.text);
  }
  result.text = combine_texts(article_id, texts, backend, params, cache, options, tally);
  result.pair_summaries = std::move(summaries);
  return result;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

[[noreturn]] void rethrow_stage(const char* stage, const std::exception& cause) {
  throw PipelineStageError("stage " + std::string(stage) + ": " + cause.what());
}

}  // namespace

ImpactSummary summarize_pair(const FactEntityPair& pair, ChatBackend& backend,
                             const CompletionParams& params, CompletionCache& cache,
                             const RetryPolicy& retry) {
  return summarize_pair_tracked(pair, backend, params, cache, retry, nullptr);
}

ArticleSummary aggregate(const std::string& article_id, std::vector<ImpactSummary> summaries,
                         ChatBackend& backend, const CompletionParams& params,
                         CompletionCache& cache, const PipelineOptions& options) {
  return aggregate_tracked(article_id, std::move(summaries), backend, params, cache, options,
                           nullptr);
}

PipelineResult run_pipeline(const Article& article, const MarkerLexicon& lexicon,
                            const EntityIndex& index, const RetrievalConfig& retrieval,
                            ChatBackend& backend, const CompletionParams& params,
                            CompletionCache& cache, EmbeddingProvider& provider,
                            const PipelineOptions& options) {
  PipelineResult result;
  result.article = article;
  CompletionTally tally;

  auto t0 = std::chrono::steady_clock::now();
  try {
    result.facts = extract_facts(article, lexicon);
  } catch (const std::exception& e) {
    rethrow_stage("extract_facts", e);
  }
  result.timings.extract_ms = elapsed_ms(t0);

  if (result.facts.empty()) {
    result.no_facts = true;
    result.summary.article_id = article.id;
    return result;
  }

  t0 = std::chrono::steady_clock::now();
  try {
    std::set<std::pair<std::size_t, std::string>> seen;
    for (const FactStatement& fact : result.facts) {
      std::vector<FactEntityPair> top = retrieve_top_k(index, fact, retrieval, provider);
      for (FactEntityPair& pair : top) {
        if (seen.emplace(pair.fact.sentence_index, pair.entity.id).second) {
          result.pairs.push_back(std::move(pair));
        }
      }
    }
  } catch (const std::exception& e) {
    rethrow_stage("retrieve", e);
  }
  result.timings.retrieve_ms = elapsed_ms(t0);

  if (result.pairs.empty()) {
    result.summary.article_id = article.id;
    result.warnings.push_back("no entities retrieved for any fact; summary left empty");
    return result;
  }

  t0 = std::chrono::steady_clock::now();
  std::vector<ImpactSummary> summaries(result.pairs.size());
  std::vector<std::exception_ptr> failures(result.pairs.size());
  {
    std::size_t workers = options.max_concurrency == 0 ? 1 : options.max_concurrency;
    workers = std::min(workers, result.pairs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= result.pairs.size()) {
          return;
        }
        try {
          summaries[i] = summarize_pair_tracked(result.pairs[i], backend, params, cache,
                                                options.retry, &tally);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(work);
      }
      for (std::thread& t : pool) {
        t.join();
      }
    }
  }
  // first failing pair (by input order) decides the outcome, so the
  // error raised does not depend on thread scheduling
  std::vector<ImpactSummary> kept;
  kept.reserve(summaries.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    if (failures[i]) {
      if (!options.best_effort) {
        try {
          std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
          rethrow_stage("summarize", e);
        }
      }
      std::string cause;
      try {
        std::rethrow_exception(failures[i]);
      } catch (const std::exception& e) {
        cause = e.what();
      }
      result.warnings.push_back("skipped pair (sentence " +
                                std::to_string(result.pairs[i].fact.sentence_index) +
                                ", entity " + result.pairs[i].entity.id + "): " + cause);
      continue;
    }
    kept.push_back(std::move(summaries[i]));
  }
  result.timings.summarize_ms = elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  try {
    result.summary = aggregate_tracked(article.id, std::move(kept), backend, params, cache,
                                       options, &tally);
  } catch (const std::exception& e) {
    rethrow_stage("aggregate", e);
  }
  result.timings.aggregate_ms = elapsed_ms(t0);

  result.completions = tally.total.load();
  result.cache_hits = tally.hits.load();
  return result;
}

}  // namespace factlens
