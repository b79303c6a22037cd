// Acceptance suite. Each criterion prints exactly one PASS/FAIL line;
// the process exits nonzero if any criterion fails. Tolerances are
// pinned here: retrieval scores 1e-9, NDCG 1e-4, norms 1e-9.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "factlens/embedding.hpp"
#include "factlens/entity_index.hpp"
#include "factlens/evaluator.hpp"
#include "factlens/factgate.hpp"
#include "factlens/ingest.hpp"
#include "factlens/jsonl.hpp"
#include "factlens/prompts.hpp"

namespace fs = std::filesystem;
using factlens::jsonl::json;

namespace {

constexpr double kScoreTol = 1e-9;
constexpr double kNdcgTol = 1e-4;
constexpr double kNormTol = 1e-9;

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR "/") + name; }

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Each criterion returns an empty string on success, or a short
// explanation of the first failure it hit.

// 1. The 40-sentence lexicon fixture must classify with full agreement
// in under a second.
std::string criterion_classification() {
  factlens::MarkerLexicon lexicon = factlens::load_lexicon("default");
  std::vector<json> records = factlens::jsonl::read_file(fixture("marker_sentences.jsonl"));
  if (records.size() != 40) {
    return "fixture holds " + std::to_string(records.size()) + " sentences, expected 40";
  }
  Clock::time_point start = Clock::now();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    factlens::Sentence s;
    s.index = i;
    s.text = records[i].at("text").get<std::string>();
    s.begin = 0;
    s.end = s.text.size();
    factlens::Classification c = factlens::classify_sentence(s, lexicon);
    if (factlens::to_string(c.label) == records[i].at("label").get<std::string>()) {
      ++agree;
    }
  }
  double elapsed = ms_since(start);
  if (agree != records.size()) {
    return std::to_string(agree) + "/40 labels agree";
  }
  if (elapsed >= 1000.0) {
    return "classification took " + std::to_string(elapsed) + " ms";
  }
  return "";
}

// 2. retrieve_top_k against a naive full-sort oracle over 100 random
// corpora. The oracle recomputes every embedding and score itself.
std::string criterion_retrieval_oracle() {
  const std::size_t dim = 256;
  std::mt19937 rng(20240221);
  const std::vector<std::string> vocab = {
      "revenue", "merger",  "pipeline", "drilling", "semiconductor", "forecast",
      "tariff",  "subsidy", "court",    "recall",   "battery",       "shipping",
      "retail",  "cloud",   "airline",  "copper",   "vaccine",       "housing"};
  std::uniform_int_distribution<std::size_t> pick_word(0, vocab.size() - 1);

  auto random_text = [&](std::size_t min_words, std::size_t max_words) {
    std::uniform_int_distribution<std::size_t> n_words(min_words, max_words);
    std::size_t n = n_words(rng);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) {
        text += ' ';
      }
      text += vocab[pick_word(rng)];
    }
    return text;
  };

  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> corpus_size(1, 200);
    std::size_t n = corpus_size(rng);
    std::vector<factlens::Entity> entities;
    for (std::size_t i = 0; i < n; ++i) {
      std::string name = "Company " + std::to_string(i);
      std::string desc = random_text(2, 8);
      // Clone an earlier entity's text now and then to force exact
      // score ties; only the id stays distinct.
      if (!entities.empty() && std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
        const factlens::Entity& donor =
            entities[std::uniform_int_distribution<std::size_t>(0, entities.size() - 1)(rng)];
        name = donor.name;
        desc = donor.description;
      }
      entities.push_back(factlens::Entity{"E" + std::to_string(i), name, desc, ""});
    }

    factlens::HashingProvider provider(dim);
    factlens::EntityIndex index = factlens::build_index(entities, provider);

    factlens::FactStatement fact;
    fact.article_id = "trial";
    fact.sentence_index = 0;
    fact.text = random_text(3, 10);

    factlens::RetrievalConfig config;
    config.k = std::uniform_int_distribution<std::size_t>(1, n + 2)(rng);
    std::vector<factlens::FactEntityPair> got =
        factlens::retrieve_top_k(index, fact, config, provider);

    // Oracle: embed everything from scratch, renormalize the same way,
    // score by plain dot product, full sort, cut at k.
    std::vector<double> query = factlens::test_embed(fact.text, dim);
    double qnorm = factlens::l2_norm(query);
    for (double& x : query) {
      x /= qnorm;
    }
    struct Scored {
      std::string id;
      double score;
    };
    std::vector<Scored> oracle;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row =
          factlens::test_embed(entities[i].name + ": " + entities[i].description, dim);
      double rnorm = factlens::l2_norm(row);
      double dot = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        dot += (row[c] / rnorm) * query[c];
      }
      oracle.push_back(Scored{entities[i].id, dot});
    }
    std::sort(oracle.begin(), oracle.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) {
        return a.score > b.score;
      }
      return a.id < b.id;
    });
    std::size_t expected = std::min(config.k, n);
    if (got.size() != expected) {
      return "trial " + std::to_string(trial) + ": got " + std::to_string(got.size()) +
             " pairs, expected " + std::to_string(expected);
    }
    for (std::size_t i = 0; i < expected; ++i) {
      if (got[i].entity.id != oracle[i].id) {
        return "trial " + std::to_string(trial) + " rank " + std::to_string(i) + ": id " +
               got[i].entity.id + " vs oracle " + oracle[i].id;
      }
      if (std::abs(got[i].score - oracle[i].score) > kScoreTol) {
        return "trial " + std::to_string(trial) + " rank " + std::to_string(i) +
               ": score off by " + std::to_string(std::abs(got[i].score - oracle[i].score));
      }
    }
  }
  return "";
}

factlens::RankingComparison six_item_comparison() {
  factlens::RankingComparison rc;
  const int system[6] = {2, 1, 3, 5, 4, 6};
  for (int i = 0; i < 6; ++i) {
    std::string item = "article-" + std::to_string(i + 1);
    rc.items.push_back(item);
    rc.human_rank[item] = i + 1;
    rc.system_rank[item] = system[i];
  }
  return rc;
}

// 3. Frozen ranking metrics on the six-article comparison.
std::string criterion_ranking_metrics() {
  factlens::RankingComparison rc = six_item_comparison();
  double got = factlens::ndcg(rc, factlens::GainVariant::Linear);
  const double expected = 0.9695878008067472;
  if (std::abs(got - expected) > kNdcgTol) {
    return "ndcg " + std::to_string(got) + " differs from hand oracle";
  }
  if (factlens::precision_at_n(rc, 1) != 0.0) {
    return "precision@1 should be 0.0";
  }
  if (factlens::precision_at_n(rc, 3) != 1.0) {
    return "precision@3 should be 1.0";
  }
  if (factlens::precision_at_n(rc, 6) != 1.0) {
    return "precision@6 should be 1.0";
  }
  return "";
}

// 4. Rendered prompts carry the required texts byte for byte.
std::string criterion_prompt_fidelity() {
  auto text_of = [](const factlens::PromptMessages& p) {
    std::string all;
    for (const factlens::Message& m : p.messages) {
      all += m.content;
      all += '\n';
    }
    return all;
  };

  factlens::FactStatement fact;
  fact.article_id = "a";
  fact.sentence_index = 0;
  fact.text = "Revenues fell.";
  factlens::Entity entity{"ACME", "ACME Corp", "a maker of industrial anvils", ""};
  std::string impact = text_of(factlens::render_impact_prompt(fact, entity));
  if (impact.find("Imagine that you are an expert financial analyst") == std::string::npos) {
    return "impact prompt lacks the analyst framing";
  }
  if (impact.find("Consider the company ") == std::string::npos) {
    return "impact prompt lacks the company framing";
  }

  std::string judge = text_of(factlens::render_eval_prompt(
      "Article body.", "Summary body.", factlens::EvalMode::Instruction,
      factlens::ScoreSchema::Scale5));
  if (judge.find("You will be given one summary written for a news article.") ==
      std::string::npos) {
    return "judge prompt lacks the task framing";
  }

  std::string oneshot = text_of(factlens::render_eval_prompt(
      "Article body.", "Summary body.", factlens::EvalMode::InstructionOneShot,
      factlens::ScoreSchema::Percent));
  if (oneshot.find("The quick brown fox jumps over the lazy dog.") == std::string::npos) {
    return "one-shot prompt lacks the worked example";
  }
  return "";
}

// 5. Score parsing fixtures and exact singleton averaging.
std::string criterion_score_parsing() {
  factlens::EvalScores percent = factlens::parse_scores(
      factlens::jsonl::read_text(fixture("judge_percent_response.txt")),
      factlens::ScoreSchema::Percent);
  std::map<std::string, double> expected_percent = {
      {"accuracy", 90.0}, {"conciseness", 60.0}, {"fluency", 90.0}, {"engagement", 80.0}};
  if (percent.values != expected_percent) {
    return "percent fixture parsed to unexpected values";
  }

  factlens::EvalScores scale = factlens::parse_scores(
      factlens::jsonl::read_text(fixture("judge_scale5_response.txt")),
      factlens::ScoreSchema::Scale5);
  std::map<std::string, double> expected_scale = {
      {"factfulness", 5.0}, {"conciseness", 3.0}, {"usefulness", 4.0}};
  if (scale.values != expected_scale) {
    return "scale fixture parsed to unexpected values";
  }

  factlens::EvalScores row;
  row.schema = factlens::ScoreSchema::Scale5;
  row.values = {{"factfulness", 4.92}, {"conciseness", 4.0}, {"usefulness", 3.5}};
  factlens::ScoreReport report =
      factlens::average_scores({row}, factlens::EvalMode::Instruction);
  std::map<std::string, double> expected_means = {
      {"factfulness", 4.92}, {"conciseness", 4.0}, {"usefulness", 3.5}};
  if (report.means != expected_means) {
    return "singleton average is not exact";
  }
  return "";
}

struct PipelineRun {
  int exit_code = -1;
  json stats;
  std::string result_json;
  std::string report_md;
};

PipelineRun run_pipeline_cli(const fs::path& work, const std::string& tag,
                             const fs::path& config) {
  fs::path out_dir = work / ("out_" + tag);
  fs::path stats_file = work / ("stats_" + tag + ".json");
  std::string cmd = std::string(FACTLENS_BIN) + " --config " + config.string() +
                    " pipeline --article " + fixture("inf_article.txt") + " --entities " +
                    fixture("entities_20.jsonl") + " --out " + out_dir.string() + " >" +
                    stats_file.string() + " 2>" + (work / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  PipelineRun run;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (run.exit_code == 0) {
    run.stats = json::parse(factlens::jsonl::read_text(stats_file));
    run.result_json = factlens::jsonl::read_text(out_dir / "result.json");
    run.report_md = factlens::jsonl::read_text(out_dir / "report.md");
  }
  return run;
}

fs::path acceptance_work_dir() {
  fs::path work = fs::temp_directory_path() / "factlens_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  return work;
}

// 6. Two consecutive CLI pipeline runs: byte-identical outputs, a fully
// warm cache on the second run, under ten seconds wall time combined.
std::string criterion_determinism(PipelineRun& first_out) {
  fs::path work = acceptance_work_dir();
  fs::path config = work / "config.json";
  factlens::jsonl::write_text_atomic(
      config,
      "{\"provider\":\"mock\",\"cache_dir\":\"" + (work / "cache").string() + "\"}\n");

  Clock::time_point start = Clock::now();
  PipelineRun first = run_pipeline_cli(work, "first", config);
  if (first.exit_code != 0) {
    return "first run exited " + std::to_string(first.exit_code);
  }
  PipelineRun second = run_pipeline_cli(work, "second", config);
  if (second.exit_code != 0) {
    return "second run exited " + std::to_string(second.exit_code);
  }
  double elapsed = ms_since(start);

  if (first.result_json != second.result_json) {
    return "result.json differs between runs";
  }
  if (first.report_md != second.report_md) {
    return "report.md differs between runs";
  }
  if (second.stats.at("cache_hits") != second.stats.at("completions")) {
    return "second run made " + second.stats.at("completions").dump() +
           " completions but only " + second.stats.at("cache_hits").dump() + " were cached";
  }
  if (elapsed >= 10000.0) {
    return "two runs took " + std::to_string(elapsed) + " ms";
  }
  first_out = std::move(first);
  return "";
}

// 7. Pair cardinality and the impacted-company set, checked against the
// structures recorded by criterion 6's first run.
std::string criterion_structure(const PipelineRun& run) {
  if (run.exit_code != 0) {
    return "no pipeline run available (criterion 6 failed)";
  }
  json result = json::parse(run.result_json);
  std::size_t facts = result.at("facts").size();
  std::size_t pairs = result.at("pairs").size();
  if (pairs != facts * 3) {
    return std::to_string(pairs) + " pairs for " + std::to_string(facts) + " facts";
  }

  std::vector<std::string> expected_impacted;
  for (const json& pair : result.at("pairs")) {
    std::string name = pair.at("entity_name").get<std::string>();
    if (std::find(expected_impacted.begin(), expected_impacted.end(), name) ==
        expected_impacted.end()) {
      expected_impacted.push_back(name);
    }
  }
  std::vector<std::string> impacted =
      result.at("summary").at("impacted_companies").get<std::vector<std::string>>();
  if (impacted != expected_impacted) {
    return "impacted_companies is not the first-appearance union of pair names";
  }
  return "";
}

// 8a. test_embed returns unit vectors for any non-degenerate text.
std::string property_unit_norm() {
  std::mt19937 rng(7701);
  const std::vector<std::string> pieces = {"Alpha",  "beta",   "GAMMA",   "delta42",
                                           "epsilon", "Zeta",  "eta-eta", "THETA",
                                           "iota,",  "kappa!", "lambda."};
  const std::size_t dims[3] = {16, 64, 256};
  for (int trial = 0; trial < 600; ++trial) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) {
        text += ' ';
      }
      text += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
    }
    std::size_t d = dims[trial % 3];
    double norm = factlens::l2_norm(factlens::test_embed(text, d));
    if (std::abs(norm - 1.0) > kNormTol) {
      return "norm " + std::to_string(norm) + " for \"" + text + "\" at d=" +
             std::to_string(d);
    }
  }
  return "";
}

factlens::RankingComparison random_comparison(std::mt19937& rng, std::size_t n) {
  std::vector<int> human(n), system(n);
  std::iota(human.begin(), human.end(), 1);
  std::iota(system.begin(), system.end(), 1);
  std::shuffle(human.begin(), human.end(), rng);
  std::shuffle(system.begin(), system.end(), rng);
  factlens::RankingComparison rc;
  for (std::size_t i = 0; i < n; ++i) {
    std::string item = "item-" + std::to_string(i);
    rc.items.push_back(item);
    rc.human_rank[item] = human[i];
    rc.system_rank[item] = system[i];
  }
  return rc;
}

// 8b. ndcg is exactly 1 when the orders agree and is unchanged by
// renaming the items.
std::string property_ndcg_invariance() {
  std::mt19937 rng(7702);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    factlens::GainVariant gain = (trial % 2 == 0) ? factlens::GainVariant::Linear
                                                  : factlens::GainVariant::Exponential;

    factlens::RankingComparison agree = random_comparison(rng, n);
    agree.system_rank = agree.human_rank;
    if (factlens::ndcg(agree, gain) != 1.0) {
      return "identity comparison of size " + std::to_string(n) + " is not 1.0";
    }

    factlens::RankingComparison rc = random_comparison(rng, n);
    double before = factlens::ndcg(rc, gain);
    std::vector<std::string> fresh;
    for (std::size_t i = 0; i < n; ++i) {
      fresh.push_back("renamed-" + std::to_string(i));
    }
    std::shuffle(fresh.begin(), fresh.end(), rng);
    factlens::RankingComparison renamed;
    for (std::size_t i = 0; i < n; ++i) {
      renamed.items.push_back(fresh[i]);
      renamed.human_rank[fresh[i]] = rc.human_rank[rc.items[i]];
      renamed.system_rank[fresh[i]] = rc.system_rank[rc.items[i]];
    }
    if (factlens::ndcg(renamed, gain) != before) {
      return "renaming items changed ndcg at size " + std::to_string(n);
    }
  }
  return "";
}

// 8c. precision_at_n equals a brute-force membership count for N <= 8.
std::string property_precision_brute_force() {
  std::mt19937 rng(7703);
  for (int trial = 0; trial < 600; ++trial) {
    std::size_t n_items = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    factlens::RankingComparison rc = random_comparison(rng, n_items);
    for (std::size_t n = 1; n <= n_items; ++n) {
      std::size_t hits = 0;
      for (const std::string& a : rc.items) {
        if (rc.system_rank.at(a) > static_cast<int>(n)) {
          continue;
        }
        if (rc.human_rank.at(a) <= static_cast<int>(n)) {
          ++hits;
        }
      }
      double expected = static_cast<double>(hits) / static_cast<double>(n);
      if (factlens::precision_at_n(rc, n) != expected) {
        return "p@" + std::to_string(n) + " mismatch at size " + std::to_string(n_items);
      }
    }
  }
  return "";
}

// 8d. format_scores and parse_scores are inverse for both schemas.
std::string property_score_round_trip() {
  std::mt19937 rng(7704);
  std::uniform_real_distribution<double> scale5(1.0, 5.0);
  std::uniform_real_distribution<double> percent(0.0, 100.0);
  for (int trial = 0; trial < 600; ++trial) {
    factlens::EvalScores scores;
    if (trial % 2 == 0) {
      scores.schema = factlens::ScoreSchema::Scale5;
      scores.values = {{"factfulness", scale5(rng)},
                       {"conciseness", scale5(rng)},
                       {"usefulness", scale5(rng)}};
      if (trial % 4 == 0) {
        scores.values["coherence"] = scale5(rng);
      }
    } else {
      scores.schema = factlens::ScoreSchema::Percent;
      scores.values = {{"accuracy", percent(rng)},
                       {"conciseness", percent(rng)},
                       {"fluency", percent(rng)},
                       {"engagement", percent(rng)}};
    }
    factlens::EvalScores parsed =
        factlens::parse_scores(factlens::format_scores(scores), scores.schema);
    if (parsed.values != scores.values) {
      return "round trip altered values on trial " + std::to_string(trial);
    }
  }
  return "";
}

// 8e. Sentence spans slice the normalized body back to the exact
// sentence texts, in order, covering the whole body.
std::string property_sentence_spans() {
  std::mt19937 rng(7705);
  const std::vector<std::string> words = {
      "markets", "rallied", "the",    "Dr. Chen", "U.S. exports", "fell",
      "by 3.5%", "Acme Inc. shares", "steeply", "quarterly", "profits",
      "“strong”"};
  const std::vector<std::string> enders = {".", "!", "?", ".\"", ".)"};
  const std::vector<std::string> gaps = {" ", "  ", "\n", "\t", " \n "};
  for (int trial = 0; trial < 600; ++trial) {
    std::size_t n_sentences = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    std::string raw;
    for (std::size_t s = 0; s < n_sentences; ++s) {
      std::size_t n_words = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
      if (s) {
        raw += gaps[std::uniform_int_distribution<std::size_t>(0, gaps.size() - 1)(rng)];
      }
      if (std::uniform_int_distribution<int>(0, 1)(rng)) {
        raw += "\"";
      }
      raw += "Open";
      for (std::size_t w = 0; w < n_words; ++w) {
        raw += ' ';
        raw += words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
      }
      raw += enders[std::uniform_int_distribution<std::size_t>(0, enders.size() - 1)(rng)];
    }
    factlens::Article article = factlens::load_article("doc", raw);
    if (article.sentences.empty()) {
      return "trial " + std::to_string(trial) + " produced no sentences";
    }
    std::string joined;
    for (std::size_t i = 0; i < article.sentences.size(); ++i) {
      const factlens::Sentence& s = article.sentences[i];
      if (s.index != i) {
        return "sentence indices out of order on trial " + std::to_string(trial);
      }
      if (s.begin >= s.end || s.end > article.body.size()) {
        return "bad span on trial " + std::to_string(trial);
      }
      if (article.body.substr(s.begin, s.end - s.begin) != s.text) {
        return "span does not slice back to the text on trial " + std::to_string(trial);
      }
      if (i) {
        joined += ' ';
      }
      joined += s.text;
    }
    if (joined != article.body) {
      return "sentences do not cover the body on trial " + std::to_string(trial);
    }
  }
  return "";
}

std::string criterion_property_suites() {
  struct Suite {
    const char* name;
    std::string (*run)();
  };
  const Suite suites[] = {
      {"embedding unit norm", property_unit_norm},
      {"ndcg invariance", property_ndcg_invariance},
      {"precision brute force", property_precision_brute_force},
      {"score round trip", property_score_round_trip},
      {"sentence spans", property_sentence_spans},
  };
  for (const Suite& suite : suites) {
    std::string error = suite.run();
    if (!error.empty()) {
      return std::string(suite.name) + ": " + error;
    }
  }
  return "";
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int number, const std::string& name, const std::string& error) {
    if (error.empty()) {
      std::cout << "PASS criterion " << number << ": " << name << "\n";
    } else {
      std::cout << "FAIL criterion " << number << ": " << name << " (" << error << ")\n";
      ++failures;
    }
  };

  try {
    report(1, "marker classification agrees with the fixture labels",
           criterion_classification());
    report(2, "retrieval matches the naive full-sort oracle", criterion_retrieval_oracle());
    report(3, "ranking metrics match the hand-computed values", criterion_ranking_metrics());
    report(4, "prompts carry the required texts verbatim", criterion_prompt_fidelity());
    report(5, "score parsing and averaging reproduce the fixtures",
           criterion_score_parsing());

    PipelineRun first_run;
    report(6, "pipeline runs are deterministic and fully cached",
           criterion_determinism(first_run));
    report(7, "pair cardinality and impacted-company set hold",
           criterion_structure(first_run));
    report(8, "property suites hold over 500+ random cases each",
           criterion_property_suites());
  } catch (const std::exception& e) {
    std::cout << "FAIL: unexpected exception: " << e.what() << "\n";
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
