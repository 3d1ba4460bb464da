#pragma once

#include <string>
#include <vector>

#include "spatialqa/algebra.hpp"
#include "spatialqa/grammar.hpp"
#include "spatialqa/model.hpp"

namespace spatialqa {

struct ParseResult {
  std::vector<Fact> facts;
  /// Parsed objects with ids "p1", "p2", ... in order of introduction.
  std::vector<StoryEntity> entities;
  std::vector<std::string> blocks;
  std::vector<std::string> diagnostics;

  /// The parse as a story skeleton (objects, blocks and facts only).
  Story as_story() const;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t sentence, std::string residual, const std::string& message)
      : Error("sentence " + std::to_string(sentence) + ": " + message + " at '" + residual + "'"),
        sentence_(sentence),
        residual_(std::move(residual)) {}
  /// 1-based sentence (or question) index.
  std::size_t sentence() const { return sentence_; }
  const std::string& residual() const { return residual_; }

 private:
  std::size_t sentence_;
  std::string residual_;
};

ParseResult parse_story(const std::string& text, const Grammar& grammar,
                        bool touching_implies_near = true);

/// Logical form and question type of a question sentence.
struct ParsedQuestion {
  QType qtype = QType::FR;
  LogicalForm logical_form;
};
ParsedQuestion parse_question(const std::string& text, const Grammar& grammar);

/// Answers a question from text alone: parse both, close, answer.
AnswerSet solve(const std::string& story_text, const std::string& question_text, const Grammar& grammar,
                bool touching_implies_near = true);

/// Parsed facts rewritten onto the ids of `story` by matching block,
/// description and ordinal; facts on unmatched entities keep parsed ids.
std::vector<Fact> align_to_story(const ParseResult& parsed, const Story& story);

}  // namespace spatialqa
