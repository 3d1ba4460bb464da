#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spatialqa/algebra.hpp"
#include "spatialqa/grammar.hpp"
#include "spatialqa/model.hpp"
#include "spatialqa/rng.hpp"

namespace spatialqa {

class NoVariant : public Error {
 public:
  using Error::Error;
};

/// Surface phrase substitutions for the unseen-vocabulary test set.
class VocabularyMap {
 public:
  struct Entry {
    std::string category;
    std::string from;
    std::string to;
  };

  /// Throws SchemaError when a category is not a bijection or a replacement
  /// is itself replaceable.
  static VocabularyMap parse(const std::string& json_text, const std::string& source = "<memory>");
  static VocabularyMap load(const std::string& path);
  /// data/unseen_vocabulary.json, loaded once.
  static const VocabularyMap& standard();

  const std::string& name() const { return name_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Replaces every mapped phrase, fixing "a"/"an" before a replacement and
  /// keeping a capitalized first letter.
  std::string apply(const std::string& text) const;
  /// Same, also moving character offsets: `offsets` are positions at token
  /// boundaries of `text` and are updated in place.
  std::string apply(const std::string& text, std::vector<std::size_t*>& offsets) const;

  /// The grammar with every lexicon phrase rewritten, for parsing rewritten text.
  Grammar rewrite(const Grammar& g) const;

 private:
  std::string name_;
  std::vector<Entry> entries_;
  std::vector<std::vector<std::string>> from_tokens_;  // parallel to entries_, longest first
};

/// Rewrites a seeded fraction of records (story, annotations and every
/// question together) into the map's vocabulary. Logical forms and golds
/// are untouched.
DatasetRecord make_unseen(const DatasetRecord& record, const VocabularyMap& map, double fraction,
                          std::uint64_t seed);

/// Questions asking for the same information as the pivot; each gold follows
/// from the pivot's through expected_consistency_gold. Throws NoVariant.
std::vector<VariantItem> make_consistency(const Question& pivot, std::size_t pivot_index, const Story& story,
                                          const EntailedSet& closure, const Grammar& grammar, Rng& rng);

/// Single-edit questions whose recomputed gold differs from the pivot's.
/// Throws NoVariant.
std::vector<VariantItem> make_contrast(const Question& pivot, std::size_t pivot_index, const Story& story,
                                       const EntailedSet& closure, const Grammar& grammar, Rng& rng);

/// The gold a consistency item must have given its pivot's gold and its edit.
std::vector<std::string> expected_consistency_gold(const Question& pivot, const VariantItem& item);

}  // namespace spatialqa
