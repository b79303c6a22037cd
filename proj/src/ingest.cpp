#include "factlens/ingest.hpp"

#include <unordered_set>
#include <utility>

namespace factlens {

namespace {

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_closing_wrapper(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

// Trailing-word forms that end in '.' without ending a sentence.
const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> kAbbrev = {
      "mr.",  "mrs.", "dr.",  "lt.",  "gen.",  "u.s.", "inc.", "corp.", "ltd.",
      "st.",  "vs.",  "e.g.", "i.e.", "no.",   "jan.", "feb.", "mar.",  "apr.",
      "jun.", "jul.", "aug.", "sep.", "sept.", "oct.", "nov.", "dec."};
  return kAbbrev;
}

}  // namespace

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  auto push = [&](char c) {
    if (pending_space && !out.empty()) {
      out += ' ';
    }
    pending_space = false;
    out += c;
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    unsigned char c = static_cast<unsigned char>(raw[i]);
    if (c == 0xE2 && i + 2 < raw.size() &&
        static_cast<unsigned char>(raw[i + 1]) == 0x80) {
      unsigned char b3 = static_cast<unsigned char>(raw[i + 2]);
      if (b3 == 0x98 || b3 == 0x99) {  // curly single quotes
        push('\'');
        i += 3;
        continue;
      }
      if (b3 == 0x9C || b3 == 0x9D) {  // curly double quotes
        push('"');
        i += 3;
        continue;
      }
    }
    if (is_space_char(static_cast<char>(c))) {
      pending_space = true;
      ++i;
      continue;
    }
    if (c < 0x20 || c == 0x7F) {  // non-whitespace control bytes
      ++i;
      continue;
    }
    push(static_cast<char>(c));
    ++i;
  }
  return out;
}

std::vector<Sentence> split_sentences(std::string_view body) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  const std::size_t n = body.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    char c = body[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i + 1;
      while (j < n && is_closing_wrapper(body[j])) {
        ++j;
      }
      std::size_t m = j;
      while (m < n && is_space_char(body[m])) {
        ++m;
      }
      bool boundary = m > j && m < n &&
                      (is_ascii_upper(body[m]) || is_ascii_digit(body[m]) ||
                       body[m] == '"' || body[m] == '\'');
      if (boundary && c == '.') {
        std::size_t w = i;
        while (w > 0 && !is_space_char(body[w - 1])) {
          --w;
        }
        std::string word(body.substr(w, i + 1 - w));
        std::size_t keep = word.find_first_not_of("\"'([");
        word = keep == std::string::npos ? std::string() : word.substr(keep);
        for (char& ch : word) {
          ch = ascii_lower(ch);
        }
        if (abbreviations().count(word) != 0) {
          boundary = false;
        }
      }
      if (boundary) {
        spans.emplace_back(start, j);
        start = m;
        i = m;
        continue;
      }
    }
    ++i;
  }
  std::size_t end = n;
  while (end > start && is_space_char(body[end - 1])) {
    --end;
  }
  if (end > start) {
    spans.emplace_back(start, end);
  }

  std::vector<Sentence> out;
  out.reserve(spans.size());
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const auto [b, e] = spans[k];
    out.push_back(Sentence{k, std::string(body.substr(b, e - b)), b, e});
  }
  return out;
}

Article load_article(std::string id, std::optional<std::string> title,
                     std::string_view raw_body) {
  std::string body = normalize_text(raw_body);
  if (body.empty()) {
    throw EmptyArticleError("article '" + id + "' has no body text");
  }
  Article article;
  article.id = std::move(id);
  if (title) {
    article.title = normalize_text(*title);
  }
  article.body = std::move(body);
  article.sentences = split_sentences(article.body);
  return article;
}

Article load_article(std::string id, std::string_view raw_body) {
  return load_article(std::move(id), std::nullopt, raw_body);
}

}  // namespace factlens
