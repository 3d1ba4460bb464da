#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "doctest.h"
#include "spatialqa/parser.hpp"
#include "spatialqa/realizer.hpp"
#include "spatialqa/sampler.hpp"
#include "spatialqa/text.hpp"

using namespace spatialqa;

namespace {

std::string grammar_text() {
  std::ifstream in(std::string(SPATIALQA_DATA_DIR) + "/grammar.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Sample {
  Scene scene;
  std::vector<Fact> facts;
  Story story;
};

Sample sample(std::uint64_t seed, RealizerOptions opts = {}) {
  SamplerConfig cfg;
  cfg.seed = seed;
  Sample s;
  s.scene = sample_scene(cfg);
  s.facts = select_story_facts(extract_geometric_facts(s.scene, cfg), cfg);
  s.story = realize_story(s.scene, s.facts, Grammar::standard(), opts, seed);
  return s;
}

bool indefinite_word(const std::string& w) {
  static const std::set<std::string> words{"a", "an", "two", "three", "four", "five", "six"};
  return words.count(to_lower(w)) > 0;
}

}  // namespace

TEST_CASE("same seed gives the same story") {
  const Sample a = sample(42), b = sample(42);
  CHECK(a.story == b.story);
  CHECK_FALSE(sample(43).story == a.story);
}

TEST_CASE("every selected fact is verbalized") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Sample s = sample(seed);
    CHECK(canonical_facts(s.story.facts) == canonical_facts(s.facts));
    std::set<std::size_t> covered;
    for (const Sentence& sen : s.story.sentences) covered.insert(sen.fact_ids.begin(), sen.fact_ids.end());
    CHECK(covered.size() == s.story.facts.size());
    CHECK(validate_story(s.story).empty());
  }
}

TEST_CASE("objects are introduced before they are referred back to") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Sample s = sample(seed);
    std::set<EntityRef> seen;
    for (const Sentence& sen : s.story.sentences) {
      bool fresh = false;
      for (const EntityRef& e : sen.entities)
        if (!e.is_block() && !seen.count(e)) fresh = true;
      if (fresh) {
        const auto toks = tokenize(sen.text);
        CHECK_MESSAGE(std::any_of(toks.begin(), toks.end(), [](const Token& t) { return indefinite_word(t.text); }),
                      sen.text);
      }
      seen.insert(sen.entities.begin(), sen.entities.end());
    }
    // The parser only resolves "the"/"it" against earlier sentences.
    CHECK_NOTHROW(parse_story(s.story.text(), Grammar::standard()));
  }
}

TEST_CASE("block relations with a shared subject conjoin their landmarks") {
  Scene s;
  for (const char* n : {"A", "B", "C"}) {
    Block b;
    b.name = n;
    s.blocks.push_back(b);
  }
  s.blocks[1].cell = {0, 1};
  s.blocks[2].cell = {1, 1};
  const auto A = EntityRef::block("A"), B = EntityRef::block("B"), C = EntityRef::block("C");
  const std::vector<Fact> facts{{A, Relation::Above, B}, {A, Relation::Above, C}};
  s.arrangement = facts;
  s.arrangement.push_back({B, Relation::Left, C});
  RealizerOptions opts;
  opts.object_conjunction_probability = 1.0;
  const std::regex conj(R"(Block A is above block [BC] and [BC]\.)");
  bool found = false;
  for (std::uint64_t seed = 0; seed < 50 && !found; ++seed)
    found = std::regex_search(realize_story(s, facts, Grammar::standard(), opts, seed).text(), conj);
  CHECK(found);
}

TEST_CASE("phenomena show up across a corpus") {
  bool group = false, pronoun = false, nested = false, hypernym = false, rel_conj = false;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::string t = sample(seed).story.text();
    group = group || std::regex_search(t, std::regex(R"(number (one|two|three))"));
    pronoun = pronoun || std::regex_search(t, std::regex(R"((^|\. )(It|They) )"));
    nested = nested || t.find(" which is ") != std::string::npos || t.find(" which are ") != std::string::npos;
    hypernym = hypernym || std::regex_search(t, std::regex(R"(\b(object|thing|shape)s?\b)"));
    rel_conj = rel_conj || std::regex_search(t, std::regex(R"((of|above|below|from|to|touching) and )"));
  }
  CHECK(group);
  CHECK(pronoun);
  CHECK(nested);
  CHECK(hypernym);
  CHECK(rel_conj);
}

TEST_CASE("role spans slice the sentence at token boundaries") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Sample s = sample(seed);
    for (const Sentence& sen : s.story.sentences) {
      std::set<std::size_t> starts, ends;
      for (const Token& t : tokenize(sen.text)) {
        starts.insert(t.begin);
        ends.insert(t.end);
      }
      for (const RoleSpans& r : sen.spans)
        for (const Span& sp : {r.trajector, r.indicator, r.landmark}) {
          if (sp.length() == 0) continue;
          REQUIRE(sp.end <= sen.text.size());
          CHECK(starts.count(sp.begin));
          CHECK(ends.count(sp.end));
        }
    }
  }
}

TEST_CASE("token count matches the tokenizer") {
  const Sample s = sample(5);
  std::size_t n = 0;
  for (const Sentence& sen : s.story.sentences) n += count_tokens(sen.text);
  CHECK(s.story.token_count == n);
}

TEST_CASE("tokenizer") {
  const auto t = tokenize("Block A's circle, number two.");
  std::vector<std::string> words;
  for (const auto& x : t) words.push_back(x.text);
  CHECK(words == std::vector<std::string>{"Block", "A's", "circle", ",", "number", "two", "."});
  CHECK(t[3].begin == 16);
  CHECK(t[3].end == 17);
  CHECK(count_tokens("") == 0);
  CHECK(count_tokens("  a  b ") == 2);
  CHECK(indefinite_article("oval") == "an");
  CHECK(indefinite_article("big") == "a");
}

TEST_CASE("shipped grammar validates") {
  CHECK(validate_grammar(Grammar::standard()).empty());
}

TEST_CASE("an unreachable nonterminal is reported") {
  const Grammar g = Grammar::parse(grammar_text() + "\nORPHAN -> nothing points here .\n");
  CHECK(validate_grammar(g).size() == 1);
}

TEST_CASE("a lexicon entry outside the vocabulary is reported") {
  std::string text = grammar_text();
  const auto at = text.find("color.black = black");
  REQUIRE(at != std::string::npos);
  text.insert(at, "color.purple = purple\n");
  CHECK(validate_grammar(Grammar::parse(text)).size() == 1);
}

TEST_CASE("uncoverable facts are refused") {
  const Sample s = sample(3);
  std::vector<Fact> facts = s.facts;
  // Objects of different blocks have no geometric relation of their own.
  const SpatialObject* a = nullptr;
  const SpatialObject* b = nullptr;
  for (const auto& o : s.scene.objects)
    for (const auto& p : s.scene.objects)
      if (o.block_id != p.block_id) {
        a = &o;
        b = &p;
      }
  REQUIRE(a != nullptr);
  facts.push_back({EntityRef::object(a->id), Relation::NearTo, EntityRef::object(b->id)});
  facts.push_back({EntityRef::object(a->id), Relation::In, EntityRef::block(a->block_id)});
  facts.push_back({EntityRef::object(b->id), Relation::In, EntityRef::block(b->block_id)});
  CHECK_THROWS_AS(realize_story(s.scene, facts, Grammar::standard(), {}, 1), UncoverableFact);
}
