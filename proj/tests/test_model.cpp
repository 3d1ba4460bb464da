#include <set>

#include "doctest.h"
#include "spatialqa/json_io.hpp"
#include "spatialqa/model.hpp"

using namespace spatialqa;

namespace {

Scene three_block_scene() {
  Scene s;
  const char* names[] = {"A", "B", "C"};
  const GridCell cells[] = {{0, 0}, {1, 0}, {0, 1}};
  for (int i = 0; i < 3; ++i) {
    Block b;
    b.name = names[i];
    b.cell = cells[i];
    const std::string id = b.name + "1";
    b.objects = {id};
    s.blocks.push_back(b);
    s.objects.push_back(
        SpatialObject{id, Attribute{Shape::Triangle, Color::Yellow, Size::Medium}, b.name, {0.5, 0.5}, 0.09});
  }
  s.arrangement = {Fact{EntityRef::block("A"), RelationKind{Relation::Left}, EntityRef::block("B")},
                   Fact{EntityRef::block("C"), RelationKind{Relation::Below}, EntityRef::block("A")}};
  return s;
}

DatasetRecord sample_record() {
  DatasetRecord r;
  r.id = "train-000042";
  r.scene = three_block_scene();
  Story& st = r.story;
  st.facts = {Fact{EntityRef::object("A1"), RelationKind{Relation::In}, EntityRef::block("A")},
              Fact{EntityRef::object("A1"), RelationKind{Relation::TouchingEdge, Edge::Top}, EntityRef::block("A")},
              Fact{EntityRef::block("A"), RelationKind{Relation::Left}, EntityRef::block("B")}};
  Sentence s1;
  s1.text = "Block A has a medium yellow triangle.";
  s1.fact_ids = {0};
  s1.spans = {RoleSpans{0, {8, 36}, {8, 11}, {0, 7}}};
  s1.entities = {EntityRef::block("A"), EntityRef::object("A1")};
  st.sentences = {s1};
  st.objects = {StoryEntity{EntityRef::object("A1"), Attribute{Shape::Triangle, Color::Yellow, Size::Medium}, "A", 0}};
  st.blocks = {"A", "B"};
  st.described_entities = {EntityRef::block("A"), EntityRef::object("A1")};
  st.token_count = 7;

  EntityDescriptor inner;
  inner.shape = Shape::Circle;
  inner.determiner = Determiner::A;
  EntityDescriptor outer;
  outer.hypernym = Hypernym::Object;
  outer.size = Size::Small;
  outer.ordinal = 2;
  outer.block = "B";
  outer.nested = NestedClause{RelationKind{Relation::NearTo}, {inner}};
  outer.number = Number::Plural;
  outer.determiner = Determiner::All;

  Question q;
  q.qtype = QType::YN;
  q.text = "Are all small objects near to a circle?";
  q.logical_form = LogicalForm{"yn_all", {outer, inner}, RelationKind{Relation::Above}};
  q.candidates = yn_candidates();
  q.gold = AnswerSet{{"No"}, {Justification{st.facts[2], 1}}, true};
  q.reasoning_depth = 3;
  r.questions = {q};
  Question fr = q;
  fr.qtype = QType::FR;
  fr.logical_form.relation.reset();
  fr.candidates = fr_candidates();
  fr.eval_excluded = {"Far from", "Near to"};
  r.questions.push_back(fr);

  r.annotations.scene_graph.nodes = {SceneGraphNode{EntityRef::block("A"), std::nullopt, "", 0},
                                     SceneGraphNode{EntityRef::object("A1"), st.objects[0].attrs, "A", 0}};
  r.annotations.scene_graph.edges = {st.facts[0]};
  r.annotations.sprl = {SpRLAnnotation{0, {SpRLTriplet{0, {8, 36}, {8, 11}, {0, 7}, "a medium yellow triangle", "has",
                                                        "Block A"}}}};
  r.variants.consistency = {VariantItem{0, "converse", q}};
  r.variants.contrast = {VariantItem{1, "quantifier", fr}};
  r.variants.unseen = UnseenInfo{"unseen", "train-000041"};
  r.vocabulary = "seen";
  r.provenance = Provenance{0xFEDCBA9876543210ULL, "abc123", std::string(kGeneratorVersion), "train", 42};
  return r;
}

}  // namespace

TEST_CASE("well-formed three-block scene has no violations") {
  CHECK(validate_scene(three_block_scene()).empty());
}

TEST_CASE("object crossing its block boundary is one violation") {
  Scene s = three_block_scene();
  s.objects[1].position.x = 0.95;
  CHECK(validate_scene(s).size() == 1);
}

TEST_CASE("duplicate block name is one violation") {
  Scene s = three_block_scene();
  s.blocks[2].name = "A";
  s.blocks[2].objects.clear();
  s.objects.pop_back();
  s.arrangement.pop_back();
  CHECK(validate_scene(s).size() == 1);
}

TEST_CASE("arrangement must agree with grid cells and relate each pair once") {
  Scene s = three_block_scene();
  s.arrangement.push_back(Fact{EntityRef::block("B"), RelationKind{Relation::Right}, EntityRef::block("A")});
  CHECK(validate_scene(s).size() == 1);
  s = three_block_scene();
  s.arrangement[0].relation = RelationKind{Relation::Right};
  CHECK(validate_scene(s).size() == 1);
}

TEST_CASE("converse is an involution and exclusion is symmetric") {
  for (Relation r : kObjectRelations) {
    auto c = converse(r);
    REQUIRE(c.has_value());
    CHECK(*converse(*c) == r);
    for (Relation s : kObjectRelations) CHECK(mutually_exclusive(r, s) == mutually_exclusive(s, r));
    CHECK_FALSE(mutually_exclusive(r, r));
  }
  CHECK_FALSE(converse(Relation::In).has_value());
  CHECK_FALSE(converse(Relation::TouchingEdge).has_value());
  CHECK(*converse(Relation::Left) == Relation::Right);
  CHECK(*converse(Relation::Above) == Relation::Below);
  CHECK(*converse(Relation::Touching) == Relation::Touching);
  std::set<Relation> transitive;
  for (Relation r : kObjectRelations)
    if (is_transitive(r)) transitive.insert(r);
  CHECK(transitive == std::set<Relation>{Relation::Left, Relation::Right, Relation::Above, Relation::Below});
  CHECK(mutually_exclusive(Relation::Touching, Relation::FarFrom));
  CHECK(mutually_exclusive(Relation::NearTo, Relation::FarFrom));
  CHECK_FALSE(mutually_exclusive(Relation::Touching, Relation::NearTo));
}

TEST_CASE("fact invariants") {
  const auto a1 = EntityRef::object("A1");
  const auto a = EntityRef::block("A");
  CHECK(fact_violation(Fact{a1, RelationKind{Relation::In}, a}).empty());
  CHECK(fact_violation(Fact{a1, RelationKind{Relation::In}, a, Polarity::Negative}).empty());
  CHECK_FALSE(fact_violation(Fact{a1, RelationKind{Relation::Left}, EntityRef::object("A2"), Polarity::Negative}).empty());
  CHECK_FALSE(fact_violation(Fact{a1, RelationKind{Relation::Left}, a1}).empty());
  CHECK_FALSE(fact_violation(Fact{a1, RelationKind{Relation::NearTo}, a}).empty());
}

TEST_CASE("record JSON round-trip is field-for-field") {
  const DatasetRecord r = sample_record();
  const std::string line = to_line(r);
  CHECK(line.find('\n') == std::string::npos);
  const DatasetRecord back = record_from_line(line, 1);
  CHECK(back.scene == r.scene);
  CHECK(back.story == r.story);
  CHECK(back.questions == r.questions);
  CHECK(back.annotations == r.annotations);
  CHECK(back.variants == r.variants);
  CHECK(back.provenance == r.provenance);
  CHECK(back == r);
  CHECK(to_line(back) == line);
}

TEST_CASE("record decoding reports the field path") {
  Json j = encode(sample_record());
  j["questions"][1]["gold"].erase("labels");
  try {
    decode_record(j);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "record.questions[1].gold.labels");
  }
  Json k = encode(sample_record());
  k["story"]["facts"][0]["relation"] = "inside";
  CHECK_THROWS_AS(decode_record(k), SchemaError);
  CHECK_THROWS_AS(record_from_line("{not json", 3), SchemaError);
}
