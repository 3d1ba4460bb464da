#pragma once

#include <cstdint>
#include <vector>

#include "spatialqa/algebra.hpp"
#include "spatialqa/grammar.hpp"
#include "spatialqa/model.hpp"
#include "spatialqa/rng.hpp"

namespace spatialqa {

class NoValidSelection : public Error {
 public:
  using Error::Error;
};

class NotDescribable : public Error {
 public:
  using Error::Error;
};

struct QuestionOptions {
  /// Chance that a definite mention uses a relative clause.
  double nested_probability = 0.3;
  /// Chance that a YN question quantifies one or both arguments.
  double quantifier_probability = 0.5;
  /// Sampling weight of candidates (and pairs) with an entailed relation,
  /// against 1 for unrelated ones.
  double related_weight = 4.0;
  /// Chance that FR/YN pairs avoid relations stated in the text.
  double exclude_direct_probability = 0.5;
  /// Chance that an FB question asks about an object no block is said to have.
  double fb_absent_probability = 0.1;
  bool touching_implies_near = true;

  bool operator==(const QuestionOptions&) const = default;
};

struct ChooseConstraints {
  /// No two chosen objects share their story description.
  bool no_similar = true;
  /// No chosen pair has a relation stated in the story.
  bool exclude_direct = false;
};

/// `n` distinct described objects honoring the constraints.
std::vector<EntityRef> choose_objects(const Story& story, const EntailedSet& closure, int n,
                                      const ChooseConstraints& constraints, Rng& rng);

/// A definite singular description that picks out `target` among the story's
/// objects; `want_nested` prefers a relative clause anchored on another object.
EntityDescriptor describe_object(const EntityRef& target, const Story& story, const EntailedSet& closure,
                                 bool want_nested, Rng& rng);

/// Builds one question of the given type; gold is left empty.
Question make_question(QType qtype, const Story& story, const EntailedSet& closure, const Grammar& grammar,
                       const QuestionOptions& opts, std::uint64_t seed);

/// Surface text of a logical form through the question templates.
std::string render_question(const LogicalForm& lf, const Grammar& grammar, Rng& rng);

/// Candidate answers for a question type; FB lists the story's blocks and none.
std::vector<std::string> question_candidates(QType qtype, const Story& story);

}  // namespace spatialqa
