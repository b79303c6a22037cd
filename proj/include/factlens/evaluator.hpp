#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "factlens/errors.hpp"
#include "factlens/gateway.hpp"
#include "factlens/prompts.hpp"

namespace factlens {

// Metric names are stored lowercase. Scale5 requires factfulness,
// conciseness, usefulness (coherence optional) in [1, 5]; Percent
// requires accuracy, conciseness, fluency, engagement in [0, 100].
struct EvalScores {
  ScoreSchema schema = ScoreSchema::Scale5;
  std::map<std::string, double> values;
  std::string raw;  // the judge text the scores were parsed from
};

// Scans judge output for "<metric>: <number>" lines (case-insensitive,
// synonyms like "factful"/"useful" accepted, decorations such as
// "(1-5)" or a trailing '%' tolerated). First occurrence of a metric
// wins. Throws MissingMetricError when a required metric is absent,
// OutOfRangeError when a value falls outside the schema range.
EvalScores parse_scores(std::string_view text, ScoreSchema schema);

// Canonical text form: one "Metric: value" line per metric in schema
// order. parse_scores(format_scores(s)) == s.
std::string format_scores(const EvalScores& scores);

struct ScoreReport {
  EvalMode mode = EvalMode::Instruction;
  ScoreSchema schema = ScoreSchema::Scale5;
  std::vector<std::string> items;  // labels, parallel to per_article; filled by callers
  std::vector<EvalScores> per_article;
  std::map<std::string, double> means;  // unrounded; render rounds to 2 decimals
};

// Means across score sets that must all share one schema. Throws
// EmptyInputError on empty input, MixedSchemaError otherwise. A metric
// whose values are all identical averages to exactly that value.
ScoreReport average_scores(const std::vector<EvalScores>& scores, EvalMode mode);

// Renders the judge prompt, completes it, and parses the scores. An
// unparseable completion is re-asked once with a stricter instruction
// before the parse error propagates.
EvalScores judge_summary(std::string_view article, std::string_view summary, EvalMode mode,
                         ChatBackend& backend, const CompletionParams& params,
                         CompletionCache& cache, const RetryPolicy& retry = {});

// Two total orders over one item set; ranks are 1-based and dense.
struct RankingComparison {
  std::vector<std::string> items;
  std::map<std::string, int> human_rank;
  std::map<std::string, int> system_rank;
};

// Throws RankMismatchError unless both maps rank exactly `items` and
// each is a permutation of 1..N.
void validate_comparison(const RankingComparison& rc);

// Reads {"item", "human_rank", "system_rank"} lines.
RankingComparison load_rankings(const std::filesystem::path& path);

enum class GainVariant { Linear, Exponential };

// Relevance of an item with human rank r out of N: linear gain
// N - r + 1, or 2^(N - r + 1) - 1 for the exponential variant.
// DCG discounts by log2(position + 1) over the system order; the
// result is normalized by the ideal (human-order) DCG.
double ndcg(const RankingComparison& rc, GainVariant gain = GainVariant::Linear);

// Overlap of the human and system top-n sets divided by n.
// Throws BadNError unless 1 <= n <= N.
double precision_at_n(const RankingComparison& rc, std::size_t n);

}  // namespace factlens
