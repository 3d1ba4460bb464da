#include <algorithm>
#include <set>

#include "doctest.h"
#include "spatialqa/algebra.hpp"
#include "spatialqa/annotator.hpp"
#include "spatialqa/parser.hpp"
#include "spatialqa/realizer.hpp"
#include "spatialqa/sampler.hpp"

using namespace spatialqa;

namespace {

Story sample_story(std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.seed = seed;
  const Scene scene = sample_scene(cfg);
  return realize_story(scene, select_story_facts(extract_geometric_facts(scene, cfg), cfg), Grammar::standard(), {},
                       seed);
}

}  // namespace

TEST_CASE("scene graph of the blockless scenario") {
  const Story s = parse_story("A blue circle is above a big triangle. To the left of the big triangle, there is a square.",
                              Grammar::standard())
                      .as_story();
  const SceneGraph g = build_scene_graph(s);
  CHECK(g.nodes.size() == 3);
  CHECK(g.edges.size() == 2);
  for (const auto& n : g.nodes) CHECK(n.attrs.has_value());
}

TEST_CASE("a story without relations gives an edgeless graph") {
  Story s;
  s.objects.push_back(StoryEntity{EntityRef::object("o1"), Attribute{Shape::Circle, Color::Blue, std::nullopt}, "", 0});
  const SceneGraph g = build_scene_graph(s);
  CHECK(g.nodes.size() == 1);
  CHECK(g.edges.empty());
}

TEST_CASE("graph edges are exactly the stated facts") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Story s = sample_story(seed);
    const SceneGraph g = build_scene_graph(s);
    const EntailedSet cl = closure(s.facts);
    CHECK(g.edges == s.facts);
    for (const Fact& f : g.edges) CHECK(cl.depth(f) == 0);
    CHECK(g.nodes.size() == s.blocks.size() + s.objects.size());
  }
}

TEST_CASE("triplet spans follow the sentence template") {
  // "The blue circle is below the big square."
  Story s;
  s.objects = {StoryEntity{EntityRef::object("o1"), Attribute{Shape::Circle, Color::Blue, std::nullopt}, "", 0},
               StoryEntity{EntityRef::object("o2"), Attribute{Shape::Square, std::nullopt, Size::Big}, "", 0}};
  s.facts = {Fact{EntityRef::object("o1"), Relation::Below, EntityRef::object("o2")}};
  Sentence sen;
  sen.text = "The blue circle is below the big square.";
  sen.fact_ids = {0};
  const std::string subj = "The blue circle", ind = "below", land = "the big square";
  const std::size_t ib = subj.size() + 4, lb = ib + ind.size() + 1;
  sen.spans = {RoleSpans{0, {0, subj.size()}, {ib, ib + ind.size()}, {lb, lb + land.size()}}};
  s.sentences = {sen};

  const auto ann = emit_sprl(s);
  REQUIRE(ann.size() == 1);
  REQUIRE(ann[0].triplets.size() == 1);
  const SpRLTriplet& t = ann[0].triplets[0];
  CHECK(t.trajector_text == subj);
  CHECK(t.indicator_text == ind);
  CHECK(t.landmark_text == land);
  CHECK(check_triplet(t, sen.text).empty());
}

TEST_CASE("a relation conjunction yields triplets sharing both arguments") {
  bool found = false;
  for (std::uint64_t seed = 0; seed < 400 && !found; ++seed) {
    const Story s = sample_story(seed);
    for (const auto& a : emit_sprl(s)) {
      std::set<std::pair<std::size_t, std::size_t>> args;
      std::set<std::size_t> indicators;
      for (const auto& t : a.triplets) {
        args.insert({t.trajector.begin, t.landmark.begin});
        indicators.insert(t.indicator.begin);
      }
      if (a.triplets.size() >= 2 && args.size() == 1 && indicators.size() == a.triplets.size()) found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("sentences without relations get no annotation") {
  const Story s = sample_story(8);
  const auto ann = emit_sprl(s);
  std::set<std::size_t> annotated;
  for (const auto& a : ann) {
    annotated.insert(a.sentence);
    CHECK_FALSE(a.triplets.empty());
  }
  CHECK(s.sentences[0].fact_ids.empty());
  CHECK_FALSE(annotated.count(0));
}

TEST_CASE("every generated triplet slices its sentence") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Story s = sample_story(seed);
    for (const auto& a : emit_sprl(s))
      for (const auto& t : a.triplets) CHECK(check_triplet(t, s.sentences[a.sentence].text).empty());
  }
}

TEST_CASE("missing spans are reported") {
  Story s = sample_story(2);
  auto it = std::find_if(s.sentences.begin(), s.sentences.end(), [&](const Sentence& x) {
    return std::any_of(x.fact_ids.begin(), x.fact_ids.end(),
                       [&](std::size_t f) { return s.facts[f].relation.type != Relation::In; });
  });
  REQUIRE(it != s.sentences.end());
  it->spans.clear();
  CHECK_THROWS_AS(emit_sprl(s), AlignmentMissing);
}

TEST_CASE("check_triplet catches bad spans") {
  const std::string sen = "The blue circle is below the big square.";
  SpRLTriplet t{0, {0, 15}, {19, 24}, {25, 39}, "The blue circle", "below", "the big square"};
  CHECK(check_triplet(t, sen).empty());
  SpRLTriplet shifted = t;
  shifted.indicator = {18, 23};
  CHECK_FALSE(check_triplet(shifted, sen).empty());
  SpRLTriplet overlap = t;
  overlap.landmark = {20, 30};
  CHECK_FALSE(check_triplet(overlap, sen).empty());
  SpRLTriplet out = t;
  out.landmark = {25, 80};
  CHECK_FALSE(check_triplet(out, sen).empty());
}
