#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factlens/errors.hpp"

namespace factlens {

// Half-open byte span [begin, end) into Article::body. Spans of a split
// cover the body without overlap; gaps between them are single spaces.
struct Sentence {
  std::size_t index = 0;
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Article {
  std::string id;
  std::optional<std::string> title;
  std::string body;  // normalized: collapsed whitespace, straight quotes
  std::vector<Sentence> sentences;
};

// Collapses all whitespace runs to single spaces, trims the ends, strips
// control characters, and maps UTF-8 curly quotes to their ASCII forms.
std::string normalize_text(std::string_view raw);

// Rule-based splitter over normalized text. A sentence ends at '.', '!'
// or '?' (plus any closing quotes/brackets) followed by whitespace and an
// uppercase letter, digit, or opening quote. Common abbreviations and
// decimal points do not end sentences.
std::vector<Sentence> split_sentences(std::string_view body);

// Normalizes and splits. Throws EmptyArticleError when the body is empty
// or whitespace-only.
Article load_article(std::string id, std::optional<std::string> title,
                     std::string_view raw_body);
Article load_article(std::string id, std::string_view raw_body);

}  // namespace factlens
