#include <algorithm>

#include "doctest.h"
#include "spatialqa/answers.hpp"
#include "spatialqa/json_io.hpp"
#include "spatialqa/parser.hpp"
#include "spatialqa/pipeline.hpp"
#include "spatialqa/questions.hpp"
#include "spatialqa/variants.hpp"

using namespace spatialqa;

namespace {

using Labels = std::vector<std::string>;

struct World {
  Story story;
  EntailedSet cl;
};

World world(std::vector<StoryEntity> objects, std::vector<Fact> facts) {
  World w;
  w.story.objects = std::move(objects);
  w.story.facts = std::move(facts);
  w.cl = closure(w.story.facts);
  return w;
}

StoryEntity obj(const std::string& id, Shape s, std::optional<Color> c, std::optional<Size> z = std::nullopt) {
  return StoryEntity{EntityRef::object(id), Attribute{s, c, z}, "", 0};
}

Fact F(const std::string& a, Relation r, const std::string& b) {
  return Fact{EntityRef::object(a), RelationKind{r}, EntityRef::object(b)};
}

EntityDescriptor d(std::optional<Shape> s, std::optional<Color> c = std::nullopt, std::optional<Size> z = std::nullopt) {
  EntityDescriptor e;
  e.shape = s;
  e.color = c;
  e.size = z;
  return e;
}

Question pivot(QType t, LogicalForm lf, const World& w) {
  Question q;
  q.qtype = t;
  q.logical_form = std::move(lf);
  q.candidates = question_candidates(t, w.story);
  Rng rng(1);
  q.text = render_question(q.logical_form, Grammar::standard(), rng);
  q.gold = answer(q.logical_form, w.story, w.cl);
  return q;
}

const VariantItem* find_edit(const std::vector<VariantItem>& items, const std::string& edit) {
  for (const auto& v : items)
    if (v.edit == edit) return &v;
  return nullptr;
}

World circle_and_shape() {
  return world({obj("o1", Shape::Circle, Color::Blue), obj("o2", Shape::Square, std::nullopt, Size::Big)},
               {F("o1", Relation::Left, "o2")});
}

}  // namespace

TEST_CASE("vocabulary map rewrites surface words only") {
  const VocabularyMap& v = VocabularyMap::standard();
  CHECK(v.apply("A blue circle is above a big triangle.") == "A white oval is on top of a large diamond.");
  CHECK(v.apply("Block A has an object.") == "Block A has an object.");
  CHECK(v.apply("The yellow square is to the left of block A.") ==
        "The green rectangle is to the left side of block A.");

  std::string text = "A big circle is below a square.";
  std::size_t a = 6, b = 13, c = 22;  // "circle", "is", "a"
  std::vector<std::size_t*> offsets{&a, &b, &c};
  const std::string out = v.apply(text, offsets);
  CHECK(out == "A large oval is under a rectangle.");
  CHECK(out.substr(a, 4) == "oval");
  CHECK(out.substr(b, 2) == "is");
  CHECK(out.substr(c, 1) == "a");
}

TEST_CASE("a vocabulary map must be a bijection") {
  CHECK_THROWS_AS(VocabularyMap::parse(R"({"name":"x","colors":{"blue":"red","black":"red"}})"), SchemaError);
  CHECK_THROWS_AS(VocabularyMap::parse(R"({"name":"x","colors":{"blue":"black","black":"red"}})"), SchemaError);
}

TEST_CASE("FR swap maps the gold through the converse") {
  const World w = circle_and_shape();
  const Question q = pivot(QType::FR, {"fr", {d(Shape::Circle, Color::Blue), d(std::nullopt, std::nullopt, Size::Big)}}, w);
  REQUIRE(q.gold.labels == Labels{"Left"});
  Rng rng(2);
  const auto items = make_consistency(q, 0, w.story, w.cl, Grammar::standard(), rng);
  const VariantItem* swap = find_edit(items, "swap_arguments");
  REQUIRE(swap != nullptr);
  CHECK(swap->question.gold.labels == Labels{"Right"});
  CHECK(swap->question.logical_form.args[0] == q.logical_form.args[1]);
  CHECK(expected_consistency_gold(q, *swap) == Labels{"Right"});
}

TEST_CASE("YN swap uses the converse relation") {
  const World w = circle_and_shape();
  const Question q = pivot(QType::YN, {"yn", {d(Shape::Circle), d(Shape::Square)}, Relation::Left}, w);
  REQUIRE(q.gold.labels == Labels{"Yes"});
  Rng rng(3);
  const auto items = make_consistency(q, 0, w.story, w.cl, Grammar::standard(), rng);
  const VariantItem* swap = find_edit(items, "swap_arguments");
  REQUIRE(swap != nullptr);
  CHECK(swap->question.logical_form.relation->type == Relation::Right);
  CHECK(swap->question.gold.labels == Labels{"Yes"});
}

TEST_CASE("CO candidate swap renames the gold") {
  const World w = world({obj("o1", Shape::Triangle, Color::Black), obj("o2", Shape::Circle, Color::Blue),
                         obj("o3", Shape::Square, Color::Yellow)},
                        {F("o2", Relation::Above, "o1")});
  const Question q = pivot(QType::CO, {"co_which", {d(Shape::Triangle), d(Shape::Circle), d(Shape::Square)}, Relation::Above}, w);
  REQUIRE(q.gold.labels == Labels{"object1"});
  Rng rng(4);
  const auto items = make_consistency(q, 0, w.story, w.cl, Grammar::standard(), rng);
  const VariantItem* swap = find_edit(items, "swap_candidates");
  REQUIRE(swap != nullptr);
  CHECK(swap->question.gold.labels == Labels{"object2"});
}

TEST_CASE("quantifying the object flips the answer") {
  // The blue circle is below the black triangle but above the big triangle.
  const World w = world({obj("o1", Shape::Circle, Color::Blue), obj("o2", Shape::Triangle, Color::Black),
                         obj("o3", Shape::Triangle, Color::Yellow, Size::Big)},
                        {F("o1", Relation::Below, "o2"), F("o1", Relation::Above, "o3")});
  const Question q =
      pivot(QType::YN, {"yn", {d(Shape::Circle, Color::Blue), d(Shape::Triangle, Color::Black)}, Relation::Below}, w);
  REQUIRE(q.gold.labels == Labels{"Yes"});
  Rng rng(5);
  const auto items = make_contrast(q, 0, w.story, w.cl, Grammar::standard(), rng);
  const VariantItem* all = find_edit(items, "quantify_object");
  REQUIRE(all != nullptr);
  CHECK(all->question.gold.labels == Labels{"No"});
  CHECK(all->question.text.find("all triangles") != std::string::npos);
  // Above is both the converse and the exclusive partner of Below.
  const VariantItem* ex = find_edit(items, "relation_converse");
  REQUIRE(ex != nullptr);
  CHECK(ex->question.logical_form.relation->type == Relation::Above);
  CHECK(ex->question.gold.labels == Labels{"No"});
  for (const auto& v : items) CHECK(v.question.gold.labels != q.gold.labels);
}

TEST_CASE("no contrast when every edit keeps the answer") {
  // Nothing relates the two objects, so any other pairing is also unknown.
  const World w = world({obj("o1", Shape::Circle, Color::Blue), obj("o2", Shape::Square, Color::Black)}, {});
  const Question q = pivot(QType::FR, {"fr", {d(Shape::Circle), d(Shape::Square)}, std::nullopt}, w);
  REQUIRE(q.gold.labels == Labels{"DK"});
  for (const auto& x : w.story.objects)
    for (const auto& y : w.story.objects) {
      if (x.ref == y.ref) continue;
      CHECK(w.cl.relations(x.ref, y.ref).empty());
    }
  Rng rng(6);
  CHECK_THROWS_AS(make_contrast(q, 0, w.story, w.cl, Grammar::standard(), rng), NoVariant);
}

TEST_CASE("unseen rewrite keeps every gold and logical form") {
  PipelineConfig c;
  c.unseen_fraction = 0.0;
  const DatasetRecord r = generate_record(c, "train", 4, 8);
  CHECK(make_unseen(r, VocabularyMap::standard(), 0.0, 1) == r);

  const DatasetRecord u = make_unseen(r, VocabularyMap::standard(), 1.0, 1);
  CHECK(u.vocabulary == "unseen");
  REQUIRE(u.variants.unseen.has_value());
  CHECK(u.variants.unseen->source_id == r.id);
  CHECK(u.story.text() != r.story.text());
  REQUIRE(u.questions.size() == r.questions.size());
  const Grammar ug = VocabularyMap::standard().rewrite(Grammar::standard());
  for (std::size_t i = 0; i < r.questions.size(); ++i) {
    CHECK(u.questions[i].gold == r.questions[i].gold);
    CHECK(u.questions[i].logical_form == r.questions[i].logical_form);
    CHECK(solve(u.story.text(), u.questions[i].text, ug).labels == r.questions[i].gold.labels);
  }
}
