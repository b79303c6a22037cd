#include "factlens/factgate.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "factlens/jsonl.hpp"

namespace factlens {

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c + 32);
    }
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Lowercases, trims, drops duplicates. Empty markers are rejected.
std::vector<std::string> normalize_markers(const std::vector<std::string>& raw,
                                           const char* list_name) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const std::string& marker : raw) {
    std::string m = to_lower_ascii(trim(marker));
    if (m.empty()) {
      throw BadLexiconError(std::string(list_name) + " contains an empty marker");
    }
    if (seen.insert(m).second) {
      out.push_back(std::move(m));
    }
  }
  return out;
}

// All word-boundary occurrences of every marker, reduced to the
// leftmost-longest non-overlapping set, in offset order.
std::vector<MarkerMatch> match_list(const std::string& lower_text,
                                    const std::vector<std::string>& markers) {
  struct Candidate {
    std::size_t begin;
    std::size_t length;
    const std::string* phrase;
  };
  std::vector<Candidate> candidates;
  for (const std::string& phrase : markers) {
    std::size_t from = 0;
    while (true) {
      std::size_t pos = lower_text.find(phrase, from);
      if (pos == std::string::npos) {
        break;
      }
      bool left_ok = pos == 0 || !is_word_char(lower_text[pos - 1]);
      std::size_t end = pos + phrase.size();
      bool right_ok = end == lower_text.size() || !is_word_char(lower_text[end]);
      if (left_ok && right_ok) {
        candidates.push_back({pos, phrase.size(), &phrase});
      }
      from = pos + 1;
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.begin != b.begin) return a.begin < b.begin;
              if (a.length != b.length) return a.length > b.length;
              return *a.phrase < *b.phrase;
            });
  std::vector<MarkerMatch> out;
  std::size_t covered = 0;
  for (const Candidate& c : candidates) {
    if (!out.empty() && c.begin < covered) {
      continue;
    }
    out.push_back({*c.phrase, c.begin});
    covered = c.begin + c.length;
  }
  return out;
}

std::vector<std::string> marker_array(const jsonl::json& doc, const char* key) {
  if (!doc.contains(key)) {
    return {};
  }
  const auto& node = doc.at(key);
  if (!node.is_array()) {
    throw BadLexiconError(std::string(key) + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string()) {
      throw BadLexiconError(std::string(key) + " must be an array of strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string to_string(Label label) {
  return label == Label::Fact ? "fact" : "opinion";
}

MarkerLexicon default_lexicon() {
  MarkerLexicon lex;
  lex.subjective_markers = {
      "i think",    "i believe",     "i feel",        "we believe", "we think",
      "in my opinion", "in my view", "in our view",   "it seems",   "it appears",
      "arguably",   "probably",      "perhaps",       "maybe",      "unfortunately",
      "fortunately", "hopefully",    "think",         "believe",    "feel",
      "hope",       "fear",          "doubt"};
  lex.factual_markers = {
      "according to", "said",          "reported",          "announced",
      "stated",       "confirmed",     "data show",         "data shows",
      "figures show", "studies show",  "research indicates", "research shows"};
  lex.negation_markers = {
      "not",    "no",     "never",  "none",    "nothing", "neither",
      "nor",    "cannot", "can't",  "won't",   "don't",   "doesn't",
      "didn't", "isn't",  "aren't", "wasn't",  "weren't", "without"};
  return lex;
}

void validate_lexicon(const MarkerLexicon& lex) {
  for (const std::string& m : lex.subjective_markers) {
    if (trim(m).empty()) throw BadLexiconError("subjective_markers contains an empty marker");
  }
  for (const std::string& m : lex.factual_markers) {
    if (trim(m).empty()) throw BadLexiconError("factual_markers contains an empty marker");
  }
  for (const std::string& m : lex.negation_markers) {
    if (trim(m).empty()) throw BadLexiconError("negation_markers contains an empty marker");
  }
  if (lex.subjective_markers.empty() && lex.factual_markers.empty()) {
    throw BadLexiconError("subjective_markers and factual_markers are both empty");
  }
}

MarkerLexicon load_lexicon(const std::string& path_or_default) {
  if (path_or_default == "default") {
    return default_lexicon();
  }
  jsonl::json doc = jsonl::json::parse(jsonl::read_text(path_or_default), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw BadLexiconError(path_or_default + " is not a JSON object");
  }
  static const std::unordered_set<std::string> kKeys = {
      "subjective_markers", "factual_markers", "negation_markers"};
  for (const auto& [key, value] : doc.items()) {
    if (kKeys.count(key) == 0) {
      throw BadLexiconError("unknown key '" + key + "' in " + path_or_default);
    }
  }
  MarkerLexicon lex;
  lex.subjective_markers =
      normalize_markers(marker_array(doc, "subjective_markers"), "subjective_markers");
  lex.factual_markers =
      normalize_markers(marker_array(doc, "factual_markers"), "factual_markers");
  lex.negation_markers =
      normalize_markers(marker_array(doc, "negation_markers"), "negation_markers");
  validate_lexicon(lex);
  return lex;
}

Classification classify_sentence(const Sentence& sentence, const MarkerLexicon& lex) {
  std::string lower = to_lower_ascii(sentence.text);
  Classification result;
  result.matched_subjective = match_list(lower, lex.subjective_markers);
  result.matched_factual = match_list(lower, lex.factual_markers);
  result.matched_negation = match_list(lower, lex.negation_markers);
  result.label = result.matched_subjective.empty() ? Label::Fact : Label::Opinion;
  return result;
}

std::vector<FactStatement> extract_facts(const Article& article, const MarkerLexicon& lex) {
  validate_lexicon(lex);
  std::vector<FactStatement> facts;
  for (const Sentence& sentence : article.sentences) {
    Classification c = classify_sentence(sentence, lex);
    if (c.label == Label::Fact) {
      facts.push_back(FactStatement{article.id, sentence.index, sentence.text, std::move(c)});
    }
  }
  return facts;
}

}  // namespace factlens
