#include <algorithm>
#include <set>

#include "closure_oracle.hpp"
#include "doctest.h"
#include "spatialqa/answers.hpp"
#include "spatialqa/questions.hpp"
#include "spatialqa/realizer.hpp"
#include "spatialqa/sampler.hpp"

using namespace spatialqa;

namespace {

using Labels = std::vector<std::string>;

struct World {
  Story story;
  EntailedSet cl;
};

StoryEntity obj(const std::string& id, Shape s, std::optional<Color> c, std::optional<Size> z,
                const std::string& block = "") {
  return StoryEntity{EntityRef::object(id), Attribute{s, c, z}, block, 0};
}

World world(std::vector<StoryEntity> objects, std::vector<Fact> facts, std::vector<std::string> blocks = {},
            bool tin = true) {
  World w;
  w.story.objects = std::move(objects);
  w.story.facts = std::move(facts);
  w.story.blocks = std::move(blocks);
  ClosureOptions o;
  o.touching_implies_near = tin;
  w.cl = closure(w.story.facts, o);
  return w;
}

EntityDescriptor d(std::optional<Shape> s, std::optional<Color> c = std::nullopt, std::optional<Size> z = std::nullopt,
                   Determiner det = Determiner::The, Number n = Number::Singular) {
  EntityDescriptor e;
  e.shape = s;
  e.color = c;
  e.size = z;
  e.determiner = det;
  e.number = n;
  return e;
}

LogicalForm lf(std::string form, std::vector<EntityDescriptor> args, std::optional<RelationKind> r = std::nullopt) {
  return LogicalForm{std::move(form), std::move(args), r};
}

Fact F(const std::string& a, Relation r, const std::string& b) {
  auto ref = [](const std::string& x) {
    return x.size() == 1 ? EntityRef::block(x) : EntityRef::object(x);
  };
  return Fact{ref(a), RelationKind{r}, ref(b)};
}

// FR labels read straight off the path oracle.
Labels oracle_fr(const std::vector<Fact>& stated, const std::string& a, const std::string& b, bool tin = true) {
  const auto e = oracle::entailed(stated, tin);
  Labels out;
  for (const std::string& label : fr_candidates()) {
    auto r = relation_from_fr_label(label);
    if (r && e.count(Fact{EntityRef::object(a), RelationKind{*r}, EntityRef::object(b)})) out.push_back(label);
  }
  if (out.empty()) out.push_back("DK");
  return out;
}

// The blockless two-sentence scenario.
World fig3() {
  return world({obj("o1", Shape::Circle, Color::Blue, std::nullopt), obj("o2", Shape::Triangle, std::nullopt, Size::Big),
                obj("o3", Shape::Square, std::nullopt, std::nullopt)},
               {F("o1", Relation::Above, "o2"), F("o3", Relation::Left, "o2")});
}

}  // namespace

TEST_CASE("FR lists every entailed relation") {
  const std::vector<Fact> stated{F("o1", Relation::Left, "o2"), F("o2", Relation::Left, "o3"),
                                 F("o3", Relation::Below, "o1")};
  const World w = world({obj("o1", Shape::Circle, Color::Blue, std::nullopt),
                         obj("o2", Shape::Square, std::nullopt, std::nullopt),
                         obj("o3", Shape::Triangle, std::nullopt, std::nullopt)},
                        stated);
  const AnswerSet a = answer(lf("fr", {d(Shape::Circle), d(Shape::Triangle)}), w.story, w.cl);
  CHECK(a.labels == oracle_fr(stated, "o1", "o3"));
  CHECK(a.labels == Labels{"Left", "Above"});
  CHECK(reasoning_depth(a) >= 1);
}

TEST_CASE("FR in the blockless scenario is DK") {
  const World w = fig3();
  CHECK(answer(lf("fr", {d(Shape::Square), d(Shape::Circle, Color::Blue)}), w.story, w.cl).labels == Labels{"DK"});
}

TEST_CASE("touching entails near only under the flag") {
  const std::vector<Fact> stated{F("o1", Relation::Touching, "o2")};
  for (bool tin : {true, false}) {
    const World w = world({obj("o1", Shape::Circle, std::nullopt, std::nullopt),
                           obj("o2", Shape::Square, std::nullopt, std::nullopt)},
                          stated, {}, tin);
    const Labels got = answer(lf("fr", {d(Shape::Circle), d(Shape::Square)}), w.story, w.cl).labels;
    CHECK(got == oracle_fr(stated, "o1", "o2", tin));
    CHECK(std::count(got.begin(), got.end(), "Near to") == (tin ? 1 : 0));
  }
}

TEST_CASE("YN in the blockless scenario") {
  const World w = fig3();
  const auto circle = d(Shape::Circle, Color::Blue), triangle = d(Shape::Triangle, std::nullopt, Size::Big);
  CHECK(answer(lf("yn", {circle, triangle}, Relation::Above), w.story, w.cl).labels == Labels{"Yes"});
  CHECK(answer(lf("yn", {circle, triangle}, Relation::Below), w.story, w.cl).labels == Labels{"No"});
  CHECK(answer(lf("yn", {d(Shape::Square), circle}, Relation::Left), w.story, w.cl).labels == Labels{"DK"});
}

TEST_CASE("quantified YN follows Kleene evaluation") {
  const std::vector<Fact> stated{F("c1", Relation::Above, "t1"), F("c2", Relation::Above, "t2")};
  const World w = world({obj("c1", Shape::Circle, Color::Blue, std::nullopt), obj("c2", Shape::Circle, Color::Black, std::nullopt),
                         obj("t1", Shape::Triangle, Color::Blue, std::nullopt),
                         obj("t2", Shape::Triangle, Color::Black, std::nullopt)},
                        stated);
  // exists circle x. forall triangle y. Below(x, y), enumerated over the oracle.
  const auto e = oracle::entailed(stated);
  auto status = [&](const std::string& x, const std::string& y) {
    if (e.count(F(x, Relation::Below, y))) return ThreeValued::True;
    if (e.count(F(x, Relation::Above, y))) return ThreeValued::False;
    return ThreeValued::Unknown;
  };
  ThreeValued any = ThreeValued::False;
  for (const char* x : {"c1", "c2"}) {
    ThreeValued all = ThreeValued::True;
    for (const char* y : {"t1", "t2"}) all = logical_and(all, status(x, y));
    any = logical_or(any, all);
  }
  const std::string expected = any == ThreeValued::True ? "Yes" : any == ThreeValued::False ? "No" : "DK";
  CHECK(expected == "No");
  const AnswerSet a = answer(lf("yn_any",
                                {d(Shape::Circle, std::nullopt, std::nullopt, Determiner::Any, Number::Plural),
                                 d(Shape::Triangle, std::nullopt, std::nullopt, Determiner::All, Number::Plural)},
                                Relation::Below),
                             w.story, w.cl);
  CHECK(a.labels == Labels{expected});

  // c1 against t2 is unknown, so no circle is provably above all triangles.
  const AnswerSet above = answer(lf("yn_any",
                                    {d(Shape::Circle, std::nullopt, std::nullopt, Determiner::Any, Number::Plural),
                                     d(Shape::Triangle, std::nullopt, std::nullopt, Determiner::All, Number::Plural)},
                                    Relation::Above),
                                 w.story, w.cl);
  CHECK(above.labels == Labels{"DK"});
}

TEST_CASE("universal over an empty set is vacuous") {
  const World w = fig3();
  const AnswerSet a = answer(lf("yn_all",
                                {d(Shape::Square, Color::Black, std::nullopt, Determiner::All, Number::Plural),
                                 d(Shape::Triangle)},
                                Relation::Left),
                             w.story, w.cl);
  CHECK(a.vacuous);
  CHECK(a.labels == Labels{"Yes"});
}

TEST_CASE("FB positive, negative and absent") {
  const World w = world({obj("o1", Shape::Circle, Color::Blue, std::nullopt, "A"),
                         obj("o2", Shape::Square, Color::Black, std::nullopt, "B")},
                        {F("o1", Relation::In, "A"), F("o2", Relation::In, "B"), F("A", Relation::Left, "B"),
                         F("B", Relation::Left, "C")},
                        {"A", "B", "C"});
  const auto blue_circle = d(Shape::Circle, Color::Blue, std::nullopt, Determiner::A);
  CHECK(answer(lf("fb_has", {blue_circle}), w.story, w.cl).labels == Labels{"A"});
  CHECK(answer(lf("fb_not", {blue_circle}), w.story, w.cl).labels == Labels{"B", "C"});
  CHECK(answer(lf("fb_has", {d(Shape::Triangle, std::nullopt, std::nullopt, Determiner::A)}), w.story, w.cl).labels ==
        Labels{"none"});
}

TEST_CASE("CO picks the candidates in relation to the anchor") {
  const World w = world({obj("oa", Shape::Triangle, Color::Black, std::nullopt), obj("ox", Shape::Circle, Color::Blue, std::nullopt),
                         obj("oy", Shape::Square, Color::Yellow, std::nullopt)},
                        {F("ox", Relation::Left, "oa"), F("ox", Relation::Above, "oa"), F("oy", Relation::Above, "oa")});
  const auto anchor = d(Shape::Triangle), x = d(Shape::Circle), y = d(Shape::Square);
  CHECK(answer(lf("co_which", {anchor, x, y}, Relation::Left), w.story, w.cl).labels == Labels{"object1"});
  CHECK(answer(lf("co_which", {anchor, x, y}, Relation::Above), w.story, w.cl).labels == Labels{"both"});
  CHECK(answer(lf("co_which", {anchor, x, y}, Relation::Right), w.story, w.cl).labels == Labels{"none"});
}

TEST_CASE("an ambiguous definite mention is refused") {
  const World w = world({obj("o1", Shape::Circle, Color::Blue, std::nullopt), obj("o2", Shape::Circle, Color::Black, std::nullopt)},
                        {F("o1", Relation::Left, "o2")});
  CHECK_THROWS_AS(answer(lf("fr", {d(Shape::Circle), d(Shape::Circle, Color::Black)}), w.story, w.cl),
                  UnresolvedMention);
}

TEST_CASE("find_similar_objects") {
  const World w = world({obj("o1", Shape::Triangle, Color::Black, std::nullopt), obj("o2", Shape::Circle, Color::Black, std::nullopt),
                         obj("o3", Shape::Circle, Color::Blue, Size::Big)},
                        {F("o1", Relation::Left, "o2"), F("o2", Relation::Left, "o3")});
  EntityDescriptor black_object = d(std::nullopt, Color::Black, std::nullopt, Determiner::A);
  black_object.hypernym = Hypernym::Object;
  CHECK(find_similar_objects(black_object, w.story, w.cl).size() == 2);
  CHECK(find_similar_objects(d(Shape::Circle, Color::Blue, std::nullopt, Determiner::A), w.story, w.cl).size() == 1);
  CHECK(find_similar_objects(d(Shape::Circle, Color::Blue, Size::Small), w.story, w.cl).empty());
}

TEST_CASE("choose_objects honours its constraints") {
  const World twins = world({obj("o1", Shape::Square, Color::Yellow, std::nullopt, "A"),
                             obj("o2", Shape::Square, Color::Yellow, std::nullopt, "A")},
                            {F("o1", Relation::In, "A"), F("o2", Relation::In, "A"), F("o1", Relation::Left, "o2")},
                            {"A"});
  Rng rng(1);
  CHECK_THROWS_AS(choose_objects(twins.story, twins.cl, 2, {}, rng), NoValidSelection);

  const World w = world({obj("o1", Shape::Square, Color::Yellow, std::nullopt, "A"),
                         obj("o2", Shape::Circle, Color::Blue, std::nullopt, "A"),
                         obj("o3", Shape::Triangle, Color::Black, std::nullopt, "A")},
                        {F("o1", Relation::In, "A"), F("o2", Relation::In, "A"), F("o3", Relation::In, "A"),
                         F("o1", Relation::Left, "o2"), F("o2", Relation::Left, "o3")},
                        {"A"});
  ChooseConstraints c;
  c.exclude_direct = true;
  std::set<std::set<std::string>> pairs;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng r(seed);
    const auto got = choose_objects(w.story, w.cl, 2, c, r);
    pairs.insert({got[0].id, got[1].id});
  }
  CHECK(pairs == std::set<std::set<std::string>>{{"o1", "o3"}});

  Rng a(9), b(9);
  CHECK(choose_objects(w.story, w.cl, 2, {}, a) == choose_objects(w.story, w.cl, 2, {}, b));
}

TEST_CASE("describe_object") {
  // Color tells nobody apart, so the only minimal description is size + shape.
  const World w = world({obj("o1", Shape::Circle, Color::Blue, Size::Big, "A"), obj("o2", Shape::Circle, Color::Blue, Size::Small, "A"),
                         obj("o3", Shape::Square, Color::Blue, Size::Big, "A")},
                        {F("o1", Relation::In, "A"), F("o2", Relation::In, "A"), F("o3", Relation::In, "A"),
                         F("o1", Relation::Above, "o3")},
                        {"A"});
  Rng rng(3);
  const EntityDescriptor plain = describe_object(EntityRef::object("o1"), w.story, w.cl, false, rng);
  CHECK(plain.shape == Shape::Circle);
  CHECK(plain.size == Size::Big);
  CHECK_FALSE(plain.color.has_value());
  CHECK_FALSE(plain.block.has_value());

  // Two blue circles; only one is above the square.
  bool nested_seen = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng r(seed);
    const EntityDescriptor n = describe_object(EntityRef::object("o1"), w.story, w.cl, true, r);
    const auto m = find_similar_objects(n, w.story, w.cl);
    REQUIRE(m.size() == 1);
    CHECK(m[0]->ref.id == "o1");
    nested_seen = nested_seen || n.nested.has_value();
  }
  CHECK(nested_seen);
}

TEST_CASE("generated questions are coherent with each other") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    SamplerConfig cfg;
    cfg.seed = seed;
    const Scene scene = sample_scene(cfg);
    const Story story = realize_story(scene, select_story_facts(extract_geometric_facts(scene, cfg), cfg),
                                      Grammar::standard(), {}, seed);
    const EntailedSet cl = closure(story.facts);
    for (int k = 0; k < 8; ++k) {
      Question q;
      try {
        q = make_question(kAllQTypes[k % 4], story, cl, Grammar::standard(), {}, derive_seed(seed, k));
      } catch (const NoValidSelection&) {
        continue;
      }
      for (const auto& arg : q.logical_form.args) {
        const auto m = find_similar_objects(arg, story, cl);
        if (arg.determiner == Determiner::The && arg.number == Number::Singular) CHECK(m.size() == 1);
        else if (q.logical_form.form.rfind("fb", 0) != 0) CHECK_FALSE(m.empty());
      }
      const AnswerSet a = answer(q.logical_form, story, cl);
      for (const auto& l : a.labels)
        CHECK((std::find(q.candidates.begin(), q.candidates.end(), l) != q.candidates.end() || l == "DK"));
      if (q.qtype != QType::FR) continue;

      CHECK((q.text.rfind("What is the relation between ", 0) == 0 ||
             q.text.rfind("What are the relations between ", 0) == 0 || q.text.rfind("Where is ", 0) == 0));
      // No exclusive pair, converse coherence, and YN agreement.
      std::set<Relation> rels;
      for (const auto& l : a.labels)
        if (auto r = relation_from_fr_label(l)) rels.insert(*r);
      for (Relation r : rels)
        for (Relation s : rels) CHECK_FALSE(mutually_exclusive(r, s));
      LogicalForm back = q.logical_form;
      std::swap(back.args[0], back.args[1]);
      std::set<Relation> back_rels;
      for (const auto& l : answer(back, story, cl).labels)
        if (auto r = relation_from_fr_label(l)) back_rels.insert(*r);
      std::set<Relation> mapped;
      for (Relation r : rels) mapped.insert(converse(r).value_or(r));
      CHECK(mapped == back_rels);
      for (Relation r : kObjectRelations) {
        const LogicalForm yn{"yn", q.logical_form.args, RelationKind{r}};
        const std::string y = answer(yn, story, cl).labels.front();
        CHECK((y == "Yes") == (rels.count(r) > 0));
        const auto ex = exclusive_partners(r);
        const bool excluded = std::any_of(ex.begin(), ex.end(), [&](Relation e) { return rels.count(e) > 0; });
        CHECK((y == "No") == excluded);
      }
    }
  }
}
