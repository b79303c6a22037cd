#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "factlens/errors.hpp"
#include "factlens/ingest.hpp"

namespace factlens {

// Marker phrases are matched case-insensitively at word boundaries.
struct MarkerLexicon {
  std::vector<std::string> subjective_markers;
  std::vector<std::string> factual_markers;
  std::vector<std::string> negation_markers;
};

// Built-in lexicon used when no file is supplied.
MarkerLexicon default_lexicon();

// Loads a lexicon from a JSON file with the three marker arrays.
// The literal name "default" returns default_lexicon(). Throws
// BadLexiconError on malformed files, empty marker strings, or when
// both the subjective and factual lists are empty.
MarkerLexicon load_lexicon(const std::string& path_or_default);

// Validates an in-memory lexicon (same rules as load_lexicon).
void validate_lexicon(const MarkerLexicon& lex);

enum class Label { Fact, Opinion };

std::string to_string(Label label);

struct MarkerMatch {
  std::string phrase;   // the lexicon entry, lowercase
  std::size_t offset;   // byte offset of the match in the sentence text
};

struct Classification {
  Label label = Label::Fact;
  std::vector<MarkerMatch> matched_subjective;
  std::vector<MarkerMatch> matched_factual;
  std::vector<MarkerMatch> matched_negation;
};

// A sentence is Opinion iff at least one subjective marker matches.
// Negation matches are informational and never change the label.
// Within one marker list, overlapping candidates resolve to the
// leftmost-longest match; matches are reported in offset order.
Classification classify_sentence(const Sentence& sentence, const MarkerLexicon& lex);

struct FactStatement {
  std::string article_id;
  std::size_t sentence_index = 0;
  std::string text;
  Classification classification;
};

// Classifies every sentence and keeps the ones labeled Fact, in
// document order.
std::vector<FactStatement> extract_facts(const Article& article, const MarkerLexicon& lex);

}  // namespace factlens
