#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spatialqa/model.hpp"
#include "spatialqa/rng.hpp"

namespace spatialqa {

// Sentence grammar file format (data/grammar.txt):
//
//   @lexicon
//   shape.square = square / squares        singular / plural forms
//   relation.in = in | has | contains      alternatives, first is canonical
//   @rules
//   HAS -> $BLOCK {has} $ITEMS . | there $COP $ITEMS {in} $BLOCK . @2
//
// UPPERCASE words are nonterminals, $NAME are slots filled by code, braces
// mark the spatial-indicator terminals, @N is a weight and <tag> a condition
// the caller must enable for the alternative to be chosen.

enum class SymbolKind : std::uint8_t { Terminal, Nonterminal, Slot };

struct Symbol {
  SymbolKind kind = SymbolKind::Terminal;
  std::string text;
  bool indicator = false;
  bool operator==(const Symbol&) const = default;
};

struct Production {
  std::string lhs;
  std::vector<Symbol> rhs;
  double weight = 1.0;
  std::vector<std::string> conditions;
  int line = 0;
};

struct LexEntry {
  std::string category;
  std::string key;
  /// Alternatives, each a singular form optionally followed by a plural form.
  std::vector<std::pair<std::string, std::string>> forms;
  int line = 0;
};

class GrammarError : public Error {
 public:
  using Error::Error;
};

/// One lexicalized phrase, lower-cased and tokenized, for reverse lookup.
struct LexPhrase {
  std::vector<std::string> tokens;
  std::string category;
  std::string key;
  Number number = Number::Singular;
};

class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<LexEntry>& entries);

  std::string shape(Shape s, Number n) const;
  std::string hypernym(Hypernym h, Number n) const;
  std::string color(Color c) const;
  std::string size(Size s) const;
  /// Canonical phrase; TouchingEdge uses the edge entry.
  std::string relation(const RelationKind& r) const;
  /// All phrases that verbalize the relation kind.
  std::vector<std::string> relation_forms(const RelationKind& r) const;
  std::string number(int n) const;
  int max_number() const { return max_number_; }

  /// Every phrase, longest first, for matching.
  const std::vector<LexPhrase>& phrases() const { return phrases_; }

  /// Copy with every phrase passed through `rewrite`.
  Lexicon rewritten(const std::function<std::string(const std::string&)>& rewrite) const;

 private:
  const LexEntry* find(std::string_view category, std::string_view key) const;
  void index();

  std::vector<LexEntry> entries_;
  std::vector<LexPhrase> phrases_;
  int max_number_ = 0;
};

inline constexpr std::string_view kStartSymbols[] = {
    "INTRO_ONE", "INTRO_MANY", "BLOCK_REL", "HAS",     "EDGE",     "OBJ_REL",  "Q_FR",
    "Q_FB_HAS",  "Q_FB_NOT",   "Q_CO_WHICH", "Q_CO_WHAT", "Q_YN", "Q_YN_ANY", "Q_YN_ALL"};

inline constexpr std::string_view kSlots[] = {"$COUNT", "$BLOCKS", "$BLOCK", "$ITEMS", "$SUBJ",
                                              "$OBJS",  "$RELS",   "$REL",   "$COP",   "$EDGE",
                                              "$X",     "$Y",      "$ANCHOR", "$C1",   "$C2"};

class Grammar {
 public:
  static Grammar parse(std::string_view text, std::string source = "<memory>");
  static Grammar load(const std::string& path);
  /// The grammar shipped in the data directory, loaded once.
  static const Grammar& standard();

  const std::vector<Production>& productions() const { return productions_; }
  const std::vector<LexEntry>& lexicon_entries() const { return lex_entries_; }
  const Lexicon& lexicon() const { return lexicon_; }
  std::vector<const Production*> alternatives(std::string_view lhs) const;

  /// Every terminal/slot sequence derivable from `start` (conditions ignored).
  std::vector<std::vector<Symbol>> flatten(std::string_view start) const;

  /// One weighted random derivation of `start`, using only alternatives whose
  /// conditions are all in `conds`. Indicator marks propagate to terminals.
  std::vector<Symbol> expand(std::string_view start, const std::set<std::string>& conds, Rng& rng) const;

  /// Same rules with a different lexicon.
  Grammar with_lexicon(Lexicon lex) const;

 private:
  std::vector<Production> productions_;
  std::vector<LexEntry> lex_entries_;
  Lexicon lexicon_;
};

/// Empty iff every nonterminal is defined, reachable from a start symbol and
/// non-recursive, every slot is known and every lexicon entry names a value
/// of the vocabulary (and the vocabulary is fully covered).
std::vector<std::string> validate_grammar(const Grammar& g);

}  // namespace spatialqa
