// factlens: fact-focused news summarization pipeline CLI.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "factlens/config.hpp"
#include "factlens/entity_index.hpp"
#include "factlens/evaluator.hpp"
#include "factlens/factgate.hpp"
#include "factlens/gateway.hpp"
#include "factlens/ingest.hpp"
#include "factlens/jsonl.hpp"
#include "factlens/prompts.hpp"
#include "factlens/summarizer.hpp"

namespace fs = std::filesystem;
using factlens::jsonl::json;

namespace {

struct GlobalOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> provider;
  bool verbose = false;
};

factlens::Config effective_config(const GlobalOptions& global) {
  std::optional<fs::path> path;
  if (global.config_path) {
    path = fs::path(*global.config_path);
  }
  factlens::Config cfg = factlens::load_config(path);
  if (global.provider) {
    cfg.provider = *global.provider;
  }
  return cfg;
}

void note(const GlobalOptions& global, const std::string& message) {
  if (global.verbose) {
    std::cerr << "factlens: " << message << "\n";
  }
}

// Articles come either as raw text (one article, id = file stem) or as
// JSONL records {"id", "title"?, "body"}.
std::vector<factlens::Article> articles_from_file(const fs::path& path) {
  std::vector<factlens::Article> articles;
  if (path.extension() == ".jsonl") {
    for (const json& rec : factlens::jsonl::read_file(path)) {
      if (!rec.contains("id") || !rec.contains("body")) {
        throw factlens::BadRecordError(path.string() + " article records need id and body");
      }
      std::optional<std::string> title;
      if (rec.contains("title") && rec.at("title").is_string()) {
        title = rec.at("title").get<std::string>();
      }
      articles.push_back(factlens::load_article(rec.at("id").get<std::string>(), title,
                                                rec.at("body").get<std::string>()));
    }
    return articles;
  }
  std::string body = factlens::jsonl::read_text(path);
  articles.push_back(factlens::load_article(path.stem().string(), body));
  return articles;
}

factlens::Article single_article_from_file(const fs::path& path) {
  std::vector<factlens::Article> articles = articles_from_file(path);
  if (articles.empty()) {
    throw factlens::EmptyArticleError(path.string() + " holds no article records");
  }
  return std::move(articles.front());
}

json sentence_record(const factlens::Sentence& s) {
  return json{{"index", s.index}, {"text", s.text}, {"begin", s.begin}, {"end", s.end}};
}

json matches_record(const std::vector<factlens::MarkerMatch>& matches) {
  json arr = json::array();
  for (const factlens::MarkerMatch& m : matches) {
    arr.push_back(json{{"phrase", m.phrase}, {"offset", m.offset}});
  }
  return arr;
}

// Facts for `retrieve` come from classify output or any JSONL with a
// "text" field; records labeled opinion are skipped.
std::vector<factlens::FactStatement> facts_from_file(const fs::path& path) {
  std::vector<factlens::FactStatement> facts;
  std::size_t line = 0;
  for (const json& rec : factlens::jsonl::read_file(path)) {
    ++line;
    if (!rec.contains("text")) {
      throw factlens::BadRecordError(path.string() + " fact records need a text field");
    }
    if (rec.contains("label") && rec.at("label").get<std::string>() != "fact") {
      continue;
    }
    factlens::FactStatement fact;
    fact.text = rec.at("text").get<std::string>();
    fact.article_id =
        rec.contains("article_id") ? rec.at("article_id").get<std::string>() : "facts";
    fact.sentence_index = rec.contains("sentence_index")
                              ? rec.at("sentence_index").get<std::size_t>()
                              : line - 1;
    facts.push_back(std::move(fact));
  }
  return facts;
}

// Entities for `retrieve` when no corpus file is given: ids recovered
// from the index file itself, names fall back to the ids.
std::vector<factlens::Entity> minimal_corpus_from_index(const fs::path& path) {
  std::vector<json> records = factlens::jsonl::read_file(path);
  std::vector<factlens::Entity> entities;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (!records[i].contains("id")) {
      continue;
    }
    std::string id = records[i].at("id").get<std::string>();
    entities.push_back(factlens::Entity{id, id, id, ""});
  }
  return entities;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string schema_name(factlens::ScoreSchema schema) {
  return schema == factlens::ScoreSchema::Scale5 ? "scale5" : "percent";
}

void emit(const std::optional<std::string>& out_path, const std::string& payload) {
  if (out_path) {
    factlens::jsonl::write_text_atomic(*out_path, payload);
  } else {
    std::cout << payload;
  }
}

json pair_record(const factlens::FactEntityPair& pair) {
  return json{{"article_id", pair.fact.article_id},
              {"sentence_index", pair.fact.sentence_index},
              {"fact", pair.fact.text},
              {"entity_id", pair.entity.id},
              {"entity_name", pair.entity.name},
              {"score", pair.score}};
}

json result_record(const factlens::PipelineResult& result) {
  json article{{"id", result.article.id}};
  if (result.article.title) {
    article["title"] = *result.article.title;
  }
  article["body"] = result.article.body;
  json sentences = json::array();
  for (const factlens::Sentence& s : result.article.sentences) {
    sentences.push_back(sentence_record(s));
  }
  article["sentences"] = std::move(sentences);

  json facts = json::array();
  for (const factlens::FactStatement& f : result.facts) {
    facts.push_back(json{{"sentence_index", f.sentence_index},
                         {"text", f.text},
                         {"matched_factual", matches_record(f.classification.matched_factual)},
                         {"matched_negation", matches_record(f.classification.matched_negation)}});
  }

  json pairs = json::array();
  for (const factlens::FactEntityPair& p : result.pairs) {
    pairs.push_back(pair_record(p));
  }

  json pair_summaries = json::array();
  for (const factlens::ImpactSummary& s : result.summary.pair_summaries) {
    pair_summaries.push_back(json{{"sentence_index", s.pair.fact.sentence_index},
                                  {"entity_id", s.pair.entity.id},
                                  {"entity_name", s.pair.entity.name},
                                  {"score", s.pair.score},
                                  {"text", s.text},
                                  {"model_id", s.model_id}});
  }
  json summary{{"article_id", result.summary.article_id},
               {"text", result.summary.text},
               {"impacted_companies", result.summary.impacted_companies},
               {"pair_summaries", std::move(pair_summaries)}};

  return json{{"article", std::move(article)},
              {"facts", std::move(facts)},
              {"pairs", std::move(pairs)},
              {"summary", std::move(summary)},
              {"no_facts", result.no_facts},
              {"warnings", result.warnings}};
}

std::string report_markdown(const factlens::PipelineResult& result) {
  std::string md = "# Article summary: " + result.article.id + "\n\n";
  md += "## Final summary\n\n";
  md += result.summary.text.empty() ? "(no summary: no factual sentences were found)"
                                    : result.summary.text;
  md += "\n\n## Impacted companies\n\n";
  if (result.summary.impacted_companies.empty()) {
    md += "(none)\n";
  } else {
    for (const std::string& name : result.summary.impacted_companies) {
      md += "- " + name + "\n";
    }
  }
  md += "\n## Pair summaries\n";
  for (const factlens::ImpactSummary& s : result.summary.pair_summaries) {
    md += "\n### " + s.pair.entity.name + " (sentence " +
          std::to_string(s.pair.fact.sentence_index) + ")\n\n";
    md += "Fact: " + s.pair.fact.text + "\n\n";
    md += s.text + "\n";
  }
  if (!result.warnings.empty()) {
    md += "\n## Warnings\n\n";
    for (const std::string& w : result.warnings) {
      md += "- " + w + "\n";
    }
  }
  return md;
}

int run_ingest(const GlobalOptions& global, const std::string& in, const std::string& out) {
  note(global, "ingesting " + in);
  std::vector<json> records;
  for (const factlens::Article& a : articles_from_file(in)) {
    json rec{{"id", a.id}};
    if (a.title) {
      rec["title"] = *a.title;
    }
    rec["body"] = a.body;
    json sentences = json::array();
    for (const factlens::Sentence& s : a.sentences) {
      sentences.push_back(sentence_record(s));
    }
    rec["sentences"] = std::move(sentences);
    records.push_back(std::move(rec));
  }
  factlens::jsonl::write_file(out, records);
  return 0;
}

int run_classify(const GlobalOptions& global, const std::string& in,
                 const std::string& lexicon_path, const std::string& out) {
  note(global, "classifying " + in);
  factlens::MarkerLexicon lexicon = factlens::load_lexicon(lexicon_path);
  std::vector<json> records;
  for (const factlens::Article& a : articles_from_file(in)) {
    for (const factlens::Sentence& s : a.sentences) {
      factlens::Classification c = factlens::classify_sentence(s, lexicon);
      records.push_back(json{{"article_id", a.id},
                             {"sentence_index", s.index},
                             {"text", s.text},
                             {"label", factlens::to_string(c.label)},
                             {"matched_subjective", matches_record(c.matched_subjective)},
                             {"matched_factual", matches_record(c.matched_factual)},
                             {"matched_negation", matches_record(c.matched_negation)}});
    }
  }
  factlens::jsonl::write_file(out, records);
  return 0;
}

int run_index(const GlobalOptions& global, const std::string& entities_path,
              const std::string& out) {
  factlens::Config cfg = effective_config(global);
  note(global, "building index with provider " + cfg.provider);
  std::unique_ptr<factlens::EmbeddingProvider> provider =
      factlens::make_embedding_provider(cfg);
  factlens::EntityIndex index =
      factlens::build_index(factlens::load_entities(entities_path), *provider);
  factlens::save_index(index, out);
  return 0;
}

int run_retrieve(const GlobalOptions& global, const std::string& index_path,
                 const std::string& facts_path, std::optional<std::size_t> k_flag,
                 const std::optional<std::string>& entities_path,
                 std::optional<double> min_score, const std::optional<std::string>& out) {
  factlens::Config cfg = effective_config(global);
  std::vector<factlens::Entity> corpus = entities_path
                                             ? factlens::load_entities(*entities_path)
                                             : minimal_corpus_from_index(index_path);
  factlens::EntityIndex index = factlens::load_index(index_path, std::move(corpus));
  std::unique_ptr<factlens::EmbeddingProvider> provider =
      factlens::make_embedding_provider(cfg);
  factlens::RetrievalConfig retrieval;
  retrieval.k = k_flag.value_or(cfg.k);
  retrieval.min_score = min_score;
  std::string payload;
  for (const factlens::FactStatement& fact : facts_from_file(facts_path)) {
    for (const factlens::FactEntityPair& pair :
         factlens::retrieve_top_k(index, fact, retrieval, *provider)) {
      payload += pair_record(pair).dump();
      payload += '\n';
    }
  }
  emit(out, payload);
  return 0;
}

int run_pipeline_cmd(const GlobalOptions& global, const std::string& article_path,
                     const std::string& entities_path,
                     const std::optional<std::string>& index_path,
                     const std::string& lexicon_path, const std::string& out_dir,
                     bool best_effort_flag) {
  factlens::Config cfg = effective_config(global);
  factlens::Article article = single_article_from_file(article_path);
  factlens::MarkerLexicon lexicon = factlens::load_lexicon(lexicon_path);
  std::vector<factlens::Entity> corpus = factlens::load_entities(entities_path);
  std::unique_ptr<factlens::EmbeddingProvider> provider =
      factlens::make_embedding_provider(cfg);
  factlens::EntityIndex index;
  if (index_path) {
    note(global, "loading index " + *index_path);
    index = factlens::load_index(*index_path, std::move(corpus));
  } else {
    note(global, "building transient index over " + entities_path);
    index = factlens::build_index(std::move(corpus), *provider);
  }
  std::unique_ptr<factlens::ChatBackend> backend = factlens::make_chat_backend(cfg);
  factlens::CompletionCache cache{fs::path(cfg.cache_dir)};
  factlens::RetrievalConfig retrieval;
  retrieval.k = cfg.k;
  factlens::PipelineOptions options;
  options.max_concurrency = cfg.max_concurrency;
  options.best_effort = cfg.best_effort || best_effort_flag;
  options.retry = factlens::retry_policy(cfg);

  factlens::PipelineResult result =
      factlens::run_pipeline(article, lexicon, index, retrieval, *backend,
                             factlens::completion_params(cfg), cache, *provider, options);

  fs::path out(out_dir);
  factlens::jsonl::write_text_atomic(out / "result.json", result_record(result).dump(2) + "\n");
  factlens::jsonl::write_text_atomic(out / "report.md", report_markdown(result));

  json stats{{"article_id", result.article.id},
             {"facts", result.facts.size()},
             {"pairs", result.pairs.size()},
             {"completions", result.completions},
             {"cache_hits", result.cache_hits},
             {"no_facts", result.no_facts},
             {"timings_ms",
              json{{"extract", result.timings.extract_ms},
                   {"retrieve", result.timings.retrieve_ms},
                   {"summarize", result.timings.summarize_ms},
                   {"aggregate", result.timings.aggregate_ms}}}};
  std::cout << stats.dump() << "\n";
  return 0;
}

int run_eval_score(const GlobalOptions& global, const std::string& articles_dir,
                   const std::string& summaries_dir, const std::string& mode_name,
                   const std::string& out) {
  factlens::Config cfg = effective_config(global);
  factlens::EvalMode mode = mode_name == "oneshot" ? factlens::EvalMode::InstructionOneShot
                                                   : factlens::EvalMode::Instruction;
  std::unique_ptr<factlens::ChatBackend> backend = factlens::make_chat_backend(cfg);
  factlens::CompletionCache cache{fs::path(cfg.cache_dir)};

  std::vector<fs::path> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(articles_dir)) {
    if (entry.is_regular_file()) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw factlens::EmptyInputError("no article files in " + articles_dir);
  }

  std::vector<std::string> items;
  std::vector<factlens::EvalScores> scores;
  for (const fs::path& article_file : files) {
    fs::path summary_file = fs::path(summaries_dir) / article_file.filename();
    std::string article = factlens::jsonl::read_text(article_file);
    std::string summary = factlens::jsonl::read_text(summary_file);
    note(global, "judging " + article_file.filename().string());
    scores.push_back(factlens::judge_summary(article, summary, mode, *backend,
                                             factlens::completion_params(cfg), cache,
                                             factlens::retry_policy(cfg)));
    items.push_back(article_file.filename().string());
  }

  factlens::ScoreReport report = factlens::average_scores(scores, mode);
  report.items = items;

  json per_article = json::array();
  for (std::size_t i = 0; i < report.per_article.size(); ++i) {
    per_article.push_back(
        json{{"item", report.items[i]}, {"values", report.per_article[i].values}});
  }
  json means;
  for (const auto& [name, value] : report.means) {
    means[name] = round2(value);
  }
  json payload{{"mode", mode_name == "oneshot" ? "oneshot" : "instruction"},
               {"schema", schema_name(report.schema)},
               {"per_article", std::move(per_article)},
               {"means", std::move(means)}};
  factlens::jsonl::write_text_atomic(out, payload.dump(2) + "\n");
  return 0;
}

int run_eval_rank(const GlobalOptions& global, const std::string& in,
                  const std::string& n_list, const std::optional<std::string>& gain_flag,
                  const std::optional<std::string>& out) {
  factlens::Config cfg = effective_config(global);
  factlens::GainVariant gain = cfg.gain_variant;
  if (gain_flag) {
    if (*gain_flag == "linear") {
      gain = factlens::GainVariant::Linear;
    } else if (*gain_flag == "exponential") {
      gain = factlens::GainVariant::Exponential;
    } else {
      throw factlens::BadConfigError("gain must be \"linear\" or \"exponential\"");
    }
  }
  factlens::RankingComparison rc = factlens::load_rankings(in);

  std::vector<std::size_t> ns;
  std::string token;
  for (char c : n_list + ",") {
    if (c == ',') {
      if (!token.empty()) {
        ns.push_back(static_cast<std::size_t>(std::stoull(token)));
        token.clear();
      }
    } else if (c >= '0' && c <= '9') {
      token += c;
    } else {
      throw factlens::BadNError("--n must be a comma-separated list of integers");
    }
  }
  if (ns.empty()) {
    throw factlens::BadNError("--n must name at least one cutoff");
  }

  json precision;
  for (std::size_t n : ns) {
    precision[std::to_string(n)] = factlens::precision_at_n(rc, n);
  }
  json payload{{"items", rc.items.size()},
               {"gain", gain == factlens::GainVariant::Linear ? "linear" : "exponential"},
               {"ndcg", factlens::ndcg(rc, gain)},
               {"precision_at", std::move(precision)}};
  emit(out, payload.dump(2) + "\n");
  return 0;
}

int run_prompt_render(const std::string& kind, const std::string& fact_text,
                      const std::string& entity_name, const std::string& entity_desc,
                      const std::string& article_id, const std::vector<std::string>& summaries,
                      const std::string& article_file, const std::string& summary_file,
                      const std::string& mode_name,
                      const std::optional<std::string>& schema_name_flag,
                      const std::optional<std::string>& out) {
  factlens::PromptMessages prompt;
  if (kind == "impact") {
    if (fact_text.empty() || entity_name.empty() || entity_desc.empty()) {
      throw factlens::BadConfigError(
          "prompt render impact needs --fact, --entity-name, and --entity-desc");
    }
    factlens::FactStatement fact;
    fact.article_id = article_id;
    fact.text = fact_text;
    factlens::Entity entity{entity_name, entity_name, entity_desc, ""};
    prompt = factlens::render_impact_prompt(fact, entity);
  } else if (kind == "aggregation") {
    if (summaries.empty()) {
      throw factlens::NoSummariesError("prompt render aggregation needs --summary texts");
    }
    std::vector<factlens::ImpactSummary> impact;
    for (const std::string& text : summaries) {
      factlens::ImpactSummary s;
      s.text = text;
      impact.push_back(std::move(s));
    }
    prompt = factlens::render_aggregation_prompt(article_id, impact);
  } else if (kind == "eval") {
    if (article_file.empty() || summary_file.empty()) {
      throw factlens::BadConfigError(
          "prompt render eval needs --article-file and --summary-file");
    }
    factlens::EvalMode mode = mode_name == "oneshot"
                                  ? factlens::EvalMode::InstructionOneShot
                                  : factlens::EvalMode::Instruction;
    factlens::ScoreSchema schema = factlens::default_schema(mode);
    if (schema_name_flag) {
      if (*schema_name_flag == "scale5") {
        schema = factlens::ScoreSchema::Scale5;
      } else if (*schema_name_flag == "percent") {
        schema = factlens::ScoreSchema::Percent;
      } else {
        throw factlens::BadConfigError("schema must be \"scale5\" or \"percent\"");
      }
    }
    prompt = factlens::render_eval_prompt(factlens::jsonl::read_text(article_file),
                                          factlens::jsonl::read_text(summary_file), mode,
                                          schema);
  } else {
    throw factlens::BadConfigError("unknown prompt kind '" + kind + "'");
  }
  emit(out, factlens::render_as_text(prompt));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fact-focused news summarization and evaluation pipeline"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "Path to a JSON config file");
  app.add_option("--provider", global.provider,
                 "Provider override: mock, remote, or precomputed:<path>");
  app.add_flag("--verbose", global.verbose, "Progress notes on standard error");

  int rc = 0;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Split articles into sentences");
  std::string ingest_in, ingest_out;
  ingest->add_option("--in", ingest_in, "Article file (.txt or .jsonl)")->required();
  ingest->add_option("--out", ingest_out, "Output JSONL path")->required();
  ingest->callback([&] { rc = run_ingest(global, ingest_in, ingest_out); });

  // classify
  auto* classify = app.add_subcommand("classify", "Label sentences fact or opinion");
  std::string classify_in, classify_lexicon = "default", classify_out;
  classify->add_option("--in", classify_in, "Article file (.txt or .jsonl)")->required();
  classify->add_option("--lexicon", classify_lexicon,
                       "Lexicon JSON path, or \"default\"");
  classify->add_option("--out", classify_out, "Output JSONL path")->required();
  classify->callback(
      [&] { rc = run_classify(global, classify_in, classify_lexicon, classify_out); });

  // index
  auto* index_cmd = app.add_subcommand("index", "Embed an entity corpus into an index");
  std::string index_entities, index_out;
  index_cmd->add_option("--entities", index_entities, "Entity corpus JSONL")->required();
  index_cmd->add_option("--out", index_out, "Index output path")->required();
  index_cmd->callback([&] { rc = run_index(global, index_entities, index_out); });

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "Top-k entities for each fact");
  std::string retrieve_index, retrieve_facts;
  std::optional<std::size_t> retrieve_k;
  std::optional<std::string> retrieve_entities, retrieve_out;
  std::optional<double> retrieve_min_score;
  retrieve->add_option("--index", retrieve_index, "Index file path")->required();
  retrieve->add_option("--facts", retrieve_facts, "Facts JSONL path")->required();
  retrieve->add_option("--k", retrieve_k, "Results per fact (default: config k)");
  retrieve->add_option("--entities", retrieve_entities,
                       "Entity corpus JSONL (enriches names in output)");
  retrieve->add_option("--min-score", retrieve_min_score, "Drop pairs scoring below this");
  retrieve->add_option("--out", retrieve_out, "Output path (default: stdout)");
  retrieve->callback([&] {
    rc = run_retrieve(global, retrieve_index, retrieve_facts, retrieve_k, retrieve_entities,
                      retrieve_min_score, retrieve_out);
  });

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Full run: facts, pairs, summaries");
  std::string pipeline_article, pipeline_entities, pipeline_lexicon = "default",
              pipeline_out;
  std::optional<std::string> pipeline_index;
  bool pipeline_best_effort = false;
  pipeline->add_option("--article", pipeline_article, "Article file")->required();
  pipeline->add_option("--entities", pipeline_entities, "Entity corpus JSONL")->required();
  pipeline->add_option("--index", pipeline_index,
                       "Prebuilt index path (default: build in memory)");
  pipeline->add_option("--lexicon", pipeline_lexicon, "Lexicon JSON path, or \"default\"");
  pipeline->add_option("--out", pipeline_out, "Output directory")->required();
  pipeline->add_flag("--best-effort", pipeline_best_effort,
                     "Skip failing pairs instead of aborting");
  pipeline->callback([&] {
    rc = run_pipeline_cmd(global, pipeline_article, pipeline_entities, pipeline_index,
                          pipeline_lexicon, pipeline_out, pipeline_best_effort);
  });

  // eval
  auto* eval = app.add_subcommand("eval", "Judge summaries and compare rankings");
  eval->require_subcommand(1);

  auto* eval_score = eval->add_subcommand("score", "LLM-as-judge scores and means");
  std::string score_articles, score_summaries, score_mode = "instruction", score_out;
  eval_score->add_option("--articles", score_articles, "Directory of article texts")
      ->required();
  eval_score->add_option("--summaries", score_summaries,
                         "Directory of summary texts (matching filenames)")
      ->required();
  eval_score->add_option("--mode", score_mode, "instruction or oneshot")
      ->check(CLI::IsMember({"instruction", "oneshot"}));
  eval_score->add_option("--out", score_out, "Report output path")->required();
  eval_score->callback(
      [&] { rc = run_eval_score(global, score_articles, score_summaries, score_mode, score_out); });

  auto* eval_rank = eval->add_subcommand("rank", "NDCG and Precision@n vs human ranks");
  std::string rank_in, rank_n = "1,3,5";
  std::optional<std::string> rank_gain, rank_out;
  eval_rank->add_option("--in", rank_in, "Rankings JSONL path")->required();
  eval_rank->add_option("--n", rank_n, "Comma-separated precision cutoffs");
  eval_rank->add_option("--gain", rank_gain, "linear or exponential");
  eval_rank->add_option("--out", rank_out, "Output path (default: stdout)");
  eval_rank->callback([&] { rc = run_eval_rank(global, rank_in, rank_n, rank_gain, rank_out); });

  // prompt render
  auto* prompt = app.add_subcommand("prompt", "Prompt template utilities");
  prompt->require_subcommand(1);
  auto* render = prompt->add_subcommand("render", "Render a prompt to text");
  std::string render_kind, render_fact, render_entity_name, render_entity_desc;
  std::string render_article_id = "article", render_article_file, render_summary_file;
  std::string render_mode = "instruction";
  std::vector<std::string> render_summaries;
  std::optional<std::string> render_schema, render_out;
  render->add_option("--kind", render_kind, "impact, aggregation, or eval")
      ->required()
      ->check(CLI::IsMember({"impact", "aggregation", "eval"}));
  render->add_option("--fact", render_fact, "Fact text (impact)");
  render->add_option("--entity-name", render_entity_name, "Entity name (impact)");
  render->add_option("--entity-desc", render_entity_desc, "Entity description (impact)");
  render->add_option("--article-id", render_article_id, "Article id (aggregation)");
  render->add_option("--summary", render_summaries,
                     "Pair summary text (aggregation; repeatable)");
  render->add_option("--article-file", render_article_file, "Article text file (eval)");
  render->add_option("--summary-file", render_summary_file, "Summary text file (eval)");
  render->add_option("--mode", render_mode, "instruction or oneshot (eval)")
      ->check(CLI::IsMember({"instruction", "oneshot"}));
  render->add_option("--schema", render_schema, "scale5 or percent (eval)");
  render->add_option("--out", render_out, "Output path (default: stdout)");
  render->callback([&] {
    rc = run_prompt_render(render_kind, render_fact, render_entity_name, render_entity_desc,
                           render_article_id, render_summaries, render_article_file,
                           render_summary_file, render_mode, render_schema, render_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const factlens::Error& e) {
    std::cerr << "factlens: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "factlens: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
