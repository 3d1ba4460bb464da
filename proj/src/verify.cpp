#include <algorithm>
#include <map>
#include <memory>

#include "spatialqa/annotator.hpp"
#include "spatialqa/answers.hpp"
#include "spatialqa/parser.hpp"
#include "spatialqa/pipeline.hpp"
#include "spatialqa/realizer.hpp"
#include "spatialqa/sampler.hpp"
#include "spatialqa/text.hpp"

namespace spatialqa {

using nlohmann::json;

namespace {

constexpr std::size_t kKeepFailures = 10;

struct Check {
  CheckResult r;
  explicit Check(std::string name) { r.name = std::move(name); }
  void pass() { ++r.checked; }
  void fail(const std::string& what) {
    ++r.checked;
    ++r.failure_count;
    if (r.failures.size() < kKeepFailures) r.failures.push_back(what);
  }
  void expect(bool ok, const std::function<std::string()>& what) { ok ? pass() : fail(what()); }
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return "[" + s + "]";
}

// Whether an entailed fact holds in the scene the story was written from.
std::string geometric_violation(const Fact& f, const Scene& scene, const std::set<Fact>& geometric) {
  const RelationKind& k = f.relation;
  if (f.polarity == Polarity::Negative) {
    if (k.type != Relation::In) return "unexpected negative fact";
    const SpatialObject* o = scene.find_object(f.subject.id);
    if (!o) return "unknown object";
    return o->block_id == f.object.id ? "object is in that block" : "";
  }
  if (f.subject.is_block() && f.object.is_block()) {
    const Block* a = scene.find_block(f.subject.id);
    const Block* b = scene.find_block(f.object.id);
    if (!a || !b) return "unknown block";
    switch (k.type) {
      case Relation::Left: return a->cell.col < b->cell.col ? "" : "block not left";
      case Relation::Right: return a->cell.col > b->cell.col ? "" : "block not right";
      case Relation::Above: return a->cell.row < b->cell.row ? "" : "block not above";
      case Relation::Below: return a->cell.row > b->cell.row ? "" : "block not below";
      default: return "unexpected block relation";
    }
  }
  const SpatialObject* a = scene.find_object(f.subject.id);
  if (!a) return "unknown object";
  if (k.type == Relation::In) return a->block_id == f.object.id ? "" : "object not in block";
  if (k.type == Relation::TouchingEdge) return geometric.count(f) ? "" : "edge contact not in geometry";
  const SpatialObject* b = scene.find_object(f.object.id);
  if (!b) return "unknown object";
  const Point pa = global_position(scene, *a), pb = global_position(scene, *b);
  switch (k.type) {
    case Relation::Left: return pa.x < pb.x ? "" : "not left";
    case Relation::Right: return pa.x > pb.x ? "" : "not right";
    case Relation::Above: return pa.y < pb.y ? "" : "not above";
    case Relation::Below: return pa.y > pb.y ? "" : "not below";
    default: return geometric.count(f) ? "" : "not in geometry";
  }
}

bool indicator_matches(const SpRLTriplet& t, const Story& story, const Grammar& g) {
  if (t.fact >= story.facts.size()) return false;
  const RelationKind& k = story.facts[t.fact].relation;
  const std::string text = to_lower(t.indicator_text);
  std::vector<std::string> forms = g.lexicon().relation_forms(k);
  if (auto c = converse(k.type); c && k.type != Relation::TouchingEdge) {
    auto more = g.lexicon().relation_forms(RelationKind(*c));
    forms.insert(forms.end(), more.begin(), more.end());
  }
  return std::any_of(forms.begin(), forms.end(), [&](const std::string& f) {
    return !f.empty() && text.find(to_lower(f)) != std::string::npos;
  });
}

}  // namespace

std::vector<CheckResult> verify(const std::vector<DatasetRecord>& records, const PipelineConfig& c,
                                const json* manifest) {
  const Grammar& seen = config_grammar(c);
  std::unique_ptr<Grammar> unseen;
  auto grammar_for = [&](const DatasetRecord& r) -> const Grammar& {
    if (r.vocabulary == "seen") return seen;
    if (!unseen) unseen = std::make_unique<Grammar>(config_vocabulary(c).rewrite(seen));
    return *unseen;
  };
  const bool tin = c.realizer.touching_implies_near;
  ClosureOptions copts;
  copts.touching_implies_near = tin;

  Check round_trip("round_trip"), solver("solver_agreement"), geometry("geometric_soundness"),
      sprl("sprl_offsets"), consistency("consistency_gold"), contrast("contrast_gold");

  for (const DatasetRecord& r : records) {
    const Grammar& g = grammar_for(r);
    const std::string text = r.story.text();
    const std::string where = r.id + ": ";

    try {
      const auto got = canonical_facts(align_to_story(parse_story(text, g, tin), r.story));
      const auto want = canonical_facts(r.story.facts);
      round_trip.expect(got == want, [&] { return where + "parsed facts differ from stated facts"; });
    } catch (const std::exception& e) {
      round_trip.fail(where + e.what());
    }

    auto solve_check = [&](const Question& q, const std::string& label) {
      try {
        const AnswerSet a = solve(text, q.text, g, tin);
        solver.expect(a.labels == q.gold.labels, [&] {
          return where + label + " '" + q.text + "' gold " + join(q.gold.labels) + " solved " + join(a.labels);
        });
      } catch (const std::exception& e) {
        solver.fail(where + label + " '" + q.text + "': " + e.what());
      }
    };
    for (std::size_t k = 0; k < r.questions.size(); ++k) solve_check(r.questions[k], "q" + std::to_string(k));
    for (const VariantItem& v : r.variants.consistency) solve_check(v.question, "consistency/" + v.edit);
    for (const VariantItem& v : r.variants.contrast) solve_check(v.question, "contrast/" + v.edit);

    EntailedSet cl;
    try {
      cl = closure(r.story.facts, copts);
    } catch (const std::exception& e) {
      geometry.fail(where + e.what());
      continue;
    }
    std::set<Fact> geometric;
    for (const Fact& f : extract_geometric_facts(r.scene, c.sampler)) geometric.insert(f);
    for (const Fact& f : cl.facts()) {
      const std::string v = geometric_violation(f, r.scene, geometric);
      geometry.expect(v.empty(), [&] { return where + to_string(f) + ": " + v; });
    }

    for (const SpRLAnnotation& a : r.annotations.sprl) {
      if (a.sentence >= r.story.sentences.size()) {
        sprl.fail(where + "annotation for missing sentence " + std::to_string(a.sentence));
        continue;
      }
      const std::string& s = r.story.sentences[a.sentence].text;
      for (const SpRLTriplet& t : a.triplets) {
        std::vector<std::string> problems = check_triplet(t, s);
        if (!indicator_matches(t, r.story, g)) problems.push_back("indicator '" + t.indicator_text + "'");
        sprl.expect(problems.empty(), [&] { return where + "sentence " + std::to_string(a.sentence) + ": " +
                                                   problems.front(); });
      }
    }

    for (const VariantItem& v : r.variants.consistency) {
      if (v.pivot >= r.questions.size()) {
        consistency.fail(where + "bad pivot");
        continue;
      }
      const auto expected = expected_consistency_gold(r.questions[v.pivot], v);
      const auto recomputed = answer(v.question.logical_form, r.story, cl).labels;
      consistency.expect(v.question.gold.labels == expected && recomputed == expected, [&] {
        return where + v.edit + " gold " + join(v.question.gold.labels) + " expected " + join(expected);
      });
    }
    for (const VariantItem& v : r.variants.contrast) {
      if (v.pivot >= r.questions.size()) {
        contrast.fail(where + "bad pivot");
        continue;
      }
      const auto recomputed = answer(v.question.logical_form, r.story, cl);
      contrast.expect(v.question.gold.labels != r.questions[v.pivot].gold.labels &&
                          recomputed.labels == v.question.gold.labels && !recomputed.vacuous,
                      [&] { return where + v.edit + " gold " + join(v.question.gold.labels); });
    }
  }

  std::vector<CheckResult> out{round_trip.r, solver.r, geometry.r, sprl.r, consistency.r, contrast.r};

  if (manifest) {
    Check recount("manifest_recount");
    std::map<std::string, std::pair<std::size_t, std::size_t>> seen_counts;  // split -> records, questions
    for (const DatasetRecord& r : records) {
      auto& sc = seen_counts[r.provenance.split];
      ++sc.first;
      sc.second += r.questions.size();
    }
    const json& splits = manifest->value("splits", json::object());
    for (const auto& kv : splits.items()) {
      const auto& sc = seen_counts[kv.key()];
      const std::size_t want_r = kv.value().value("records", std::size_t{0});
      const std::size_t want_q = kv.value().value("questions", std::size_t{0});
      recount.expect(sc.first == want_r && sc.second == want_q, [&] {
        return kv.key() + ": manifest " + std::to_string(want_r) + "/" + std::to_string(want_q) + " found " +
               std::to_string(sc.first) + "/" + std::to_string(sc.second);
      });
    }
    for (const auto& [split, sc] : seen_counts)
      if (!splits.contains(split)) recount.fail(split + ": records not listed in the manifest");
    out.push_back(recount.r);
  }
  return out;
}

json report_json(const std::vector<CheckResult>& checks) {
  json out = json::array();
  bool all = true;
  for (const CheckResult& c : checks) {
    all = all && c.passed();
    out.push_back(json{{"name", c.name},
                       {"checked", c.checked},
                       {"failures", c.failure_count},
                       {"examples", c.failures},
                       {"passed", c.passed()}});
  }
  return json{{"checks", out}, {"passed", all}};
}

}  // namespace spatialqa
