#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spatialqa/model.hpp"

namespace spatialqa {

/// A token is a maximal run of ASCII letters, digits and apostrophes, or a
/// single other non-space character. Offsets are byte offsets into the input.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Token> tokenize(std::string_view text);
std::size_t count_tokens(std::string_view text);

bool is_word_char(char c);
std::string to_lower(std::string_view s);
/// "a" or "an" for the following word.
std::string_view indefinite_article(std::string_view next_word);

/// Builds one sentence from tokens, inserting spaces between words but not
/// before closing punctuation, and reports the span of each appended piece.
class TextBuilder {
 public:
  /// Appends a single token; returns its span.
  Span token(std::string_view t);
  /// Appends space-separated words; returns the span covering them.
  Span words(std::string_view phrase);
  std::size_t size() const { return text_.size(); }
  /// Text with the first letter upper-cased.
  std::string finish() const;

 private:
  std::string text_;
};

}  // namespace spatialqa
