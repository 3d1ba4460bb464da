#include "spatialqa/text.hpp"

#include <cctype>

namespace spatialqa {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '\'';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (is_word_char(c))
      while (j < text.size() && is_word_char(text[j])) ++j;
    out.push_back(Token{std::string(text.substr(i, j - i)), i, j});
    i = j;
  }
  return out;
}

std::size_t count_tokens(std::string_view text) { return tokenize(text).size(); }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view indefinite_article(std::string_view next_word) {
  if (next_word.empty()) return "a";
  switch (std::tolower(static_cast<unsigned char>(next_word.front()))) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return "an";
    default: return "a";
  }
}

Span TextBuilder::token(std::string_view t) {
  const bool closing = t.size() == 1 && !is_word_char(t.front());
  if (!text_.empty() && !closing) text_ += ' ';
  const std::size_t begin = text_.size();
  text_ += t;
  return Span{begin, text_.size()};
}

Span TextBuilder::words(std::string_view phrase) {
  Span covered{text_.size(), text_.size()};
  bool first = true;
  for (const auto& tok : tokenize(phrase)) {
    const Span s = token(tok.text);
    if (first) covered.begin = s.begin;
    covered.end = s.end;
    first = false;
  }
  return covered;
}

std::string TextBuilder::finish() const {
  std::string out = text_;
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace spatialqa
