#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spatialqa/algebra.hpp"
#include "spatialqa/grammar.hpp"
#include "spatialqa/model.hpp"
#include "spatialqa/text.hpp"

namespace spatialqa {

// Noun phrases have the fixed shape
//   DET [size] [color] (shape | hypernym) [number N] [in block X] [which is|are REL NP]
// where DET is the/a/an/all/any or a count word for introductions.

/// Words of a descriptor, lower-case except block names.
std::string render_descriptor(const EntityDescriptor& d, const Lexicon& lex);
/// Introduction of `count` identical objects: "a big square", "two blue circles".
std::string render_item(const Attribute& attrs, int count, const Lexicon& lex);
/// "x", "x and y", "x, y and z".
std::string join_list(const std::vector<std::string>& parts);

/// A token sequence with lower-cased copies for matching.
struct TokenSeq {
  std::vector<Token> tokens;
  std::vector<std::string> lower;

  explicit TokenSeq(std::string_view text);
  std::size_t size() const { return tokens.size(); }
  bool is(std::size_t pos, std::string_view word) const { return pos < lower.size() && lower[pos] == word; }
};

/// Longest lexicon phrase of `category` starting at `pos`.
const LexPhrase* match_phrase(const TokenSeq& seq, std::size_t pos, const Lexicon& lex,
                              std::string_view category);
/// Relation phrase (object relations, or TouchingEdge when `edges`); sets `end`.
std::optional<RelationKind> match_relation(const TokenSeq& seq, std::size_t pos, const Lexicon& lex,
                                           bool edges, std::size_t& end);
std::optional<int> match_number(const TokenSeq& seq, std::size_t pos, const Lexicon& lex);
/// A block name token: an upper-case letter followed by letters or digits.
bool is_block_name(std::string_view token);

struct ParsedDescriptor {
  EntityDescriptor desc;
  int count = 0;  // > 0 when introduced by a count word
  std::size_t end = 0;
};

/// Parses one noun phrase at `pos`. `allow_count` admits count words as
/// determiners; `max_nesting` bounds relative clauses.
std::optional<ParsedDescriptor> parse_descriptor(const TokenSeq& seq, std::size_t pos, const Lexicon& lex,
                                                 bool allow_count, int max_nesting);

/// True iff the entity satisfies the attribute, ordinal and block constraints
/// (nested clauses are not checked here).
bool matches_attributes(const StoryEntity& e, const EntityDescriptor& d);

/// Entities among `pool` that satisfy the descriptor; nested clauses require
/// an entailed relation to some match of the inner descriptor.
std::vector<const StoryEntity*> resolve(const EntityDescriptor& d, const std::vector<StoryEntity>& pool,
                                        const EntailedSet& closure);

}  // namespace spatialqa
