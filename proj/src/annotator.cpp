#include "spatialqa/annotator.hpp"

#include <algorithm>

namespace spatialqa {

SceneGraph build_scene_graph(const Story& story) {
  SceneGraph g;
  for (const auto& b : story.blocks) g.nodes.push_back(SceneGraphNode{EntityRef::block(b), std::nullopt, "", 0});
  for (const auto& o : story.objects) g.nodes.push_back(SceneGraphNode{o.ref, o.attrs, o.block, o.ordinal});
  g.edges = story.facts;
  return g;
}

std::vector<SpRLAnnotation> emit_sprl(const Story& story) {
  std::vector<SpRLAnnotation> out;
  for (std::size_t i = 0; i < story.sentences.size(); ++i) {
    const Sentence& s = story.sentences[i];
    SpRLAnnotation ann;
    ann.sentence = i;
    for (std::size_t fid : s.fact_ids) {
      const bool spanned = std::any_of(s.spans.begin(), s.spans.end(), [&](const RoleSpans& r) { return r.fact == fid; });
      if (spanned) continue;
      if (fid >= story.facts.size() || story.facts[fid].relation.type != Relation::In)
        throw AlignmentMissing("sentence " + std::to_string(i) + " states fact " + std::to_string(fid) +
                               " without spans");
    }
    for (const auto& r : s.spans) {
      SpRLTriplet t;
      t.fact = r.fact;
      t.trajector = r.trajector;
      t.indicator = r.indicator;
      t.landmark = r.landmark;
      if (auto problems = check_triplet(t, s.text); !problems.empty() && problems.front() != "text mismatch")
        throw AlignmentMissing("sentence " + std::to_string(i) + ": " + problems.front());
      t.trajector_text = s.text.substr(r.trajector.begin, r.trajector.length());
      t.indicator_text = s.text.substr(r.indicator.begin, r.indicator.length());
      t.landmark_text = s.text.substr(r.landmark.begin, r.landmark.length());
      ann.triplets.push_back(std::move(t));
    }
    if (!ann.triplets.empty()) out.push_back(std::move(ann));
  }
  return out;
}

std::vector<std::string> check_triplet(const SpRLTriplet& t, const std::string& sentence) {
  std::vector<std::string> out;
  const Span spans[] = {t.trajector, t.indicator, t.landmark};
  for (const Span& s : spans)
    if (s.begin >= s.end || s.end > sentence.size()) out.push_back("span out of bounds or empty");
  if (!out.empty()) return out;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (spans[a].begin < spans[b].end && spans[b].begin < spans[a].end) out.push_back("overlapping spans");
  if (!out.empty()) return out;
  if (sentence.substr(t.trajector.begin, t.trajector.length()) != t.trajector_text ||
      sentence.substr(t.indicator.begin, t.indicator.length()) != t.indicator_text ||
      sentence.substr(t.landmark.begin, t.landmark.length()) != t.landmark_text)
    out.push_back("text mismatch");
  return out;
}

}  // namespace spatialqa
