#pragma once

#include <vector>

#include "spatialqa/algebra.hpp"
#include "spatialqa/model.hpp"

namespace spatialqa {

class UnresolvedMention : public Error {
 public:
  using Error::Error;
};

/// Story objects satisfying every constraint of the descriptor; hypernyms
/// match any shape and nested clauses are checked against the closure.
std::vector<const StoryEntity*> find_similar_objects(const EntityDescriptor& d, const Story& story,
                                                     const EntailedSet& closure);

/// Entailed relations from X to Y as FR labels, or DK.
AnswerSet answer_fr(const LogicalForm& lf, const Story& story, const EntailedSet& closure);
/// Blocks that contain (fb_has) or provably do not contain (fb_not) a match.
AnswerSet answer_fb(const LogicalForm& lf, const Story& story, const EntailedSet& closure);
/// Which of two candidates stands in the relation to the anchor.
AnswerSet answer_co(const LogicalForm& lf, const Story& story, const EntailedSet& closure);
/// Kleene evaluation with the subject quantifier outermost.
AnswerSet answer_yn(const LogicalForm& lf, const Story& story, const EntailedSet& closure);

/// Dispatches on the logical form's family.
AnswerSet answer(const LogicalForm& lf, const Story& story, const EntailedSet& closure);

/// Deepest justification fact; 0 for unjustified answers.
int reasoning_depth(const AnswerSet& a);

}  // namespace spatialqa
