#include "factlens/evaluator.hpp"

#include <cmath>
#include <regex>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "factlens/jsonl.hpp"

namespace factlens {

namespace {

std::string to_lower_ascii(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c + 32);
    }
  }
  return s;
}

// canonical metric name per synonym, lowercase
const std::unordered_map<std::string, std::string>& synonyms() {
  static const std::unordered_map<std::string, std::string> kMap = {
      {"factfulness", "factfulness"}, {"factful", "factfulness"},
      {"conciseness", "conciseness"}, {"concise", "conciseness"},
      {"usefulness", "usefulness"},   {"useful", "usefulness"},
      {"coherence", "coherence"},     {"coherent", "coherence"},
      {"accuracy", "accuracy"},       {"accurate", "accuracy"},
      {"fluency", "fluency"},         {"fluent", "fluency"},
      {"engagement", "engagement"},   {"engaging", "engagement"},
  };
  return kMap;
}

const std::vector<std::string>& required_metrics(ScoreSchema schema) {
  static const std::vector<std::string> kScale5 = {"factfulness", "conciseness",
                                                   "usefulness"};
  static const std::vector<std::string> kPercent = {"accuracy", "conciseness", "fluency",
                                                    "engagement"};
  return schema == ScoreSchema::Scale5 ? kScale5 : kPercent;
}

bool metric_belongs(ScoreSchema schema, const std::string& canonical) {
  for (const std::string& m : required_metrics(schema)) {
    if (m == canonical) {
      return true;
    }
  }
  return schema == ScoreSchema::Scale5 && canonical == "coherence";
}

void check_range(ScoreSchema schema, const std::string& name, double value) {
  double lo = schema == ScoreSchema::Scale5 ? 1.0 : 0.0;
  double hi = schema == ScoreSchema::Scale5 ? 5.0 : 100.0;
  if (value < lo || value > hi) {
    throw OutOfRangeError(name + " is " + jsonl::json(value).dump() + ", outside [" +
                          jsonl::json(lo).dump() + ", " + jsonl::json(hi).dump() + "]");
  }
}

// shortest text that parses back to the identical double
std::string number_text(double value) { return jsonl::json(value).dump(); }

double mean_of(const std::vector<double>& values) {
  bool constant = true;
  for (double v : values) {
    if (v != values.front()) {
      constant = false;
      break;
    }
  }
  // identical inputs average to that exact value, no rounding drift
  if (constant) {
    return values.front();
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

}  // namespace

EvalScores parse_scores(std::string_view text, ScoreSchema schema) {
  EvalScores out;
  out.schema = schema;
  out.raw = std::string(text);

  static const std::regex kMetricLine(
      R"(([A-Za-z]+)\s*(?:\([^)\n]*\))?\s*:\s*(\d+(?:\.\d+)?)\s*%?)",
      std::regex::icase);
  std::string input(text);
  auto begin = std::sregex_iterator(input.begin(), input.end(), kMetricLine);
  auto end = std::sregex_iterator();
  for (auto it = begin; it != end; ++it) {
    std::string name = to_lower_ascii((*it)[1].str());
    auto canon = synonyms().find(name);
    if (canon == synonyms().end() || !metric_belongs(schema, canon->second)) {
      continue;
    }
    if (out.values.count(canon->second) != 0) {
      continue;  // first occurrence wins
    }
    double value = std::stod((*it)[2].str());
    out.values.emplace(canon->second, value);
  }

  for (const std::string& name : required_metrics(schema)) {
    if (out.values.count(name) == 0) {
      throw MissingMetricError(name + " not found in judge output");
    }
  }
  for (const auto& [name, value] : out.values) {
    check_range(schema, name, value);
  }
  return out;
}

std::string format_scores(const EvalScores& scores) {
  std::string out;
  auto append = [&](const char* label, const std::string& key) {
    auto it = scores.values.find(key);
    if (it == scores.values.end()) {
      return;
    }
    out += label;
    out += ": ";
    out += number_text(it->second);
    if (scores.schema == ScoreSchema::Percent) {
      out += '%';
    }
    out += '\n';
  };
  if (scores.schema == ScoreSchema::Scale5) {
    append("Factfulness", "factfulness");
    append("Conciseness", "conciseness");
    append("Usefulness", "usefulness");
    append("Coherence", "coherence");
  } else {
    append("Accuracy", "accuracy");
    append("Conciseness", "conciseness");
    append("Fluency", "fluency");
    append("Engagement", "engagement");
  }
  if (!out.empty()) {
    out.pop_back();
  }
  return out;
}

ScoreReport average_scores(const std::vector<EvalScores>& scores, EvalMode mode) {
  if (scores.empty()) {
    throw EmptyInputError("no scores to average");
  }
  ScoreSchema schema = scores.front().schema;
  for (const EvalScores& s : scores) {
    if (s.schema != schema) {
      throw MixedSchemaError("scores mix the Scale5 and Percent schemas");
    }
  }
  ScoreReport report;
  report.mode = mode;
  report.schema = schema;
  report.per_article = scores;

  std::vector<std::string> metric_names;
  for (const EvalScores& s : scores) {
    for (const auto& [name, value] : s.values) {
      bool known = false;
      for (const std::string& m : metric_names) {
        if (m == name) {
          known = true;
          break;
        }
      }
      if (!known) {
        metric_names.push_back(name);
      }
    }
  }
  for (const std::string& name : metric_names) {
    std::vector<double> values;
    for (const EvalScores& s : scores) {
      auto it = s.values.find(name);
      if (it != s.values.end()) {
        values.push_back(it->second);
      }
    }
    report.means.emplace(name, mean_of(values));
  }
  return report;
}

EvalScores judge_summary(std::string_view article, std::string_view summary, EvalMode mode,
                         ChatBackend& backend, const CompletionParams& params,
                         CompletionCache& cache, const RetryPolicy& retry) {
  auto blank = [](std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
  };
  if (blank(article) || blank(summary)) {
    throw EmptyInputError("judge_summary needs non-empty article and summary texts");
  }
  ScoreSchema schema = default_schema(mode);
  PromptMessages prompt = render_eval_prompt(article, summary, mode);
  Completion first = complete(backend, prompt, params, cache, retry);
  try {
    return parse_scores(first.text, schema);
  } catch (const Error& e) {
    if (e.code() != "MissingMetric" && e.code() != "OutOfRange") {
      throw;
    }
  }
  // one bounded repair attempt before the parse error stands
  PromptMessages reask = prompt;
  reask.messages.back().content += "\n\nRespond only with the metric lines.";
  Completion second = complete(backend, reask, params, cache, retry);
  return parse_scores(second.text, schema);
}

void validate_comparison(const RankingComparison& rc) {
  const std::size_t n = rc.items.size();
  if (n == 0) {
    throw RankMismatchError("ranking has no items");
  }
  if (rc.human_rank.size() != n || rc.system_rank.size() != n) {
    throw RankMismatchError("rank maps do not cover exactly the item set");
  }
  std::vector<bool> human_seen(n, false);
  std::vector<bool> system_seen(n, false);
  for (const std::string& item : rc.items) {
    auto h = rc.human_rank.find(item);
    auto s = rc.system_rank.find(item);
    if (h == rc.human_rank.end() || s == rc.system_rank.end()) {
      throw RankMismatchError("item '" + item + "' is missing from a rank map");
    }
    if (h->second < 1 || static_cast<std::size_t>(h->second) > n ||
        human_seen[static_cast<std::size_t>(h->second) - 1]) {
      throw RankMismatchError("human ranks are not a permutation of 1.." +
                              std::to_string(n));
    }
    if (s->second < 1 || static_cast<std::size_t>(s->second) > n ||
        system_seen[static_cast<std::size_t>(s->second) - 1]) {
      throw RankMismatchError("system ranks are not a permutation of 1.." +
                              std::to_string(n));
    }
    human_seen[static_cast<std::size_t>(h->second) - 1] = true;
    system_seen[static_cast<std::size_t>(s->second) - 1] = true;
  }
}

RankingComparison load_rankings(const std::filesystem::path& path) {
  RankingComparison rc;
  for (const jsonl::json& rec : jsonl::read_file(path)) {
    if (!rec.contains("item") || !rec.contains("human_rank") ||
        !rec.contains("system_rank")) {
      throw BadRecordError(path.string() +
                           " rankings need item, human_rank, and system_rank");
    }
    std::string item = rec.at("item").get<std::string>();
    rc.human_rank[item] = rec.at("human_rank").get<int>();
    rc.system_rank[item] = rec.at("system_rank").get<int>();
    rc.items.push_back(std::move(item));
  }
  validate_comparison(rc);
  return rc;
}

double ndcg(const RankingComparison& rc, GainVariant gain) {
  validate_comparison(rc);
  const std::size_t n = rc.items.size();
  // item name at each 1-based rank position
  std::vector<const std::string*> by_system(n);
  std::vector<const std::string*> by_human(n);
  for (const std::string& item : rc.items) {
    by_system[static_cast<std::size_t>(rc.system_rank.at(item)) - 1] = &item;
    by_human[static_cast<std::size_t>(rc.human_rank.at(item)) - 1] = &item;
  }
  auto gain_of = [&](const std::string& item) {
    double rel = static_cast<double>(n) - rc.human_rank.at(item) + 1.0;
    if (gain == GainVariant::Exponential) {
      return std::exp2(rel) - 1.0;
    }
    return rel;
  };
  auto dcg = [&](const std::vector<const std::string*>& order) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += gain_of(*order[i]) / std::log2(static_cast<double>(i) + 2.0);
    }
    return total;
  };
  return dcg(by_system) / dcg(by_human);
}

double precision_at_n(const RankingComparison& rc, std::size_t n) {
  validate_comparison(rc);
  if (n < 1 || n > rc.items.size()) {
    throw BadNError("n must be in [1, " + std::to_string(rc.items.size()) + "], got " +
                    std::to_string(n));
  }
  std::size_t overlap = 0;
  for (const std::string& item : rc.items) {
    if (static_cast<std::size_t>(rc.system_rank.at(item)) <= n &&
        static_cast<std::size_t>(rc.human_rank.at(item)) <= n) {
      ++overlap;
    }
  }
  return static_cast<double>(overlap) / static_cast<double>(n);
}

}  // namespace factlens
