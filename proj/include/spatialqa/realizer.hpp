#pragma once

#include <cstdint>
#include <vector>

#include "spatialqa/grammar.hpp"
#include "spatialqa/model.hpp"

namespace spatialqa {

struct RealizerOptions {
  /// Chance that an object's story description mentions its color / size.
  double color_probability = 0.75;
  double size_probability = 0.65;
  /// Chance that an object without an identical twin is introduced in its
  /// block's "has" sentence rather than inline in a relation sentence.
  double introduce_in_has_probability = 0.55;
  double pronoun_probability = 0.5;
  double nested_mention_probability = 0.25;
  double hypernym_probability = 0.2;
  /// Chance of giving each relation of a multi-relation pair its own sentence.
  double split_relations_probability = 0.3;
  double object_conjunction_probability = 0.5;
  double group_subject_probability = 0.7;
  bool touching_implies_near = true;

  bool operator==(const RealizerOptions&) const = default;
};

class UncoverableFact : public Error {
 public:
  using Error::Error;
};

/// Renders the facts about a scene as a story. The result's fact list holds
/// one orientation of every input fact (converse pairs collapse into one).
Story realize_story(const Scene& scene, const std::vector<Fact>& facts, const Grammar& grammar,
                    const RealizerOptions& opts, std::uint64_t seed);

/// One orientation per converse pair: the fact whose subject sorts first.
Fact canonical_fact(const Fact& f);
std::vector<Fact> canonical_facts(const std::vector<Fact>& facts);

}  // namespace spatialqa
