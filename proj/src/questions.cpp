#include "spatialqa/questions.hpp"

#include <algorithm>
#include <set>

#include "spatialqa/answers.hpp"
#include "spatialqa/phrase.hpp"
#include "spatialqa/text.hpp"

namespace spatialqa {

namespace {

constexpr Relation kObjectRelations[] = {Relation::Left, Relation::Right, Relation::Above, Relation::Below,
                                         Relation::NearTo, Relation::FarFrom,  Relation::Touching};
constexpr Hypernym kHypernyms[] = {Hypernym::Object, Hypernym::Shape, Hypernym::Thing};

bool object_relation(const RelationKind& r) {
  return std::find(std::begin(kObjectRelations), std::end(kObjectRelations), r.type) != std::end(kObjectRelations);
}

std::vector<RelationKind> entailed_between(const EntityRef& a, const EntityRef& b, const EntailedSet& closure) {
  std::vector<RelationKind> out;
  if (a == b) return out;
  for (const auto& r : closure.relations(a, b))
    if (object_relation(r)) out.push_back(r);
  return out;
}

bool stated_between(const Story& story, const EntityRef& a, const EntityRef& b) {
  return std::any_of(story.facts.begin(), story.facts.end(), [&](const Fact& f) {
    return (f.subject == a && f.object == b) || (f.subject == b && f.object == a);
  });
}

const StoryEntity& entity(const Story& story, const EntityRef& ref) {
  const StoryEntity* e = story.find_object(ref.id);
  if (e == nullptr) throw NoValidSelection("object " + ref.id + " is not described");
  return *e;
}

bool only(const std::vector<const StoryEntity*>& found, const EntityRef& target) {
  return found.size() == 1 && found.front()->ref == target;
}

// Description components; the noun is the shape when `shape` is set and a
// hypernym otherwise.
struct Form {
  bool color = false;
  bool size = false;
  bool shape = false;
  bool block = false;
  bool ordinal = false;

  int mask() const { return color | size << 1 | shape << 2 | block << 3 | ordinal << 4; }
};

EntityDescriptor build(const StoryEntity& e, const Form& f, Rng& rng) {
  EntityDescriptor d;
  if (f.color) d.color = e.attrs.color;
  if (f.size) d.size = e.attrs.size;
  if (f.shape) d.shape = e.attrs.shape;
  else d.hypernym = kHypernyms[rng.below(std::size(kHypernyms))];
  if (f.block) d.block = e.block;
  if (f.ordinal) d.ordinal = e.ordinal;
  return d;
}

// With `qualifiers`, forms may add the ordinal (after a shape noun only) and
// carry the block qualifier whenever the story has more than one block.
std::vector<Form> forms_of(const StoryEntity& e, const Story& story, bool qualifiers) {
  std::vector<Form> out;
  const bool block = qualifiers && story.blocks.size() > 1;
  for (int color = 0; color <= (e.attrs.color ? 1 : 0); ++color)
    for (int size = 0; size <= (e.attrs.size ? 1 : 0); ++size)
      for (int shape = 0; shape <= 1; ++shape)
        for (int ordinal = 0; ordinal <= (qualifiers && shape == 1 && e.ordinal > 0 ? 1 : 0); ++ordinal)
          out.push_back(Form{color == 1, size == 1, shape == 1, block, ordinal == 1});
  return out;
}

std::optional<EntityDescriptor> plain_description(const StoryEntity& e, const Story& story,
                                                  const EntailedSet& closure, Rng& rng) {
  std::vector<Form> unique;
  for (const Form& f : forms_of(e, story, true)) {
    EntityDescriptor d = build(e, f, rng);
    if (only(find_similar_objects(d, story, closure), e.ref)) unique.push_back(f);
  }
  // Inclusion-minimal forms: no unique form uses a strict subset of the parts.
  std::vector<Form> minimal;
  for (const Form& f : unique) {
    const bool reducible = std::any_of(unique.begin(), unique.end(), [&](const Form& g) {
      return g.mask() != f.mask() && (g.mask() & f.mask()) == g.mask();
    });
    if (!reducible) minimal.push_back(f);
  }
  if (minimal.empty()) return std::nullopt;
  return build(e, rng.pick(minimal), rng);
}

// Descriptors of `e` shaped "base which is R inner" where the base alone
// matches more than `e`; `unique` additionally requires the whole to pick `e`.
std::vector<EntityDescriptor> nested_descriptions(const StoryEntity& e, const Story& story,
                                                  const EntailedSet& closure, bool unique, Rng& rng) {
  std::vector<EntityDescriptor> out;
  for (const Form& f : forms_of(e, story, false)) {
    const EntityDescriptor base = build(e, f, rng);
    if (only(find_similar_objects(base, story, closure), e.ref)) continue;
    for (const auto& y : story.objects) {
      const auto rels = entailed_between(e.ref, y.ref, closure);
      if (rels.empty()) continue;
      auto inner = plain_description(y, story, closure, rng);
      if (!inner) continue;
      EntityDescriptor d = base;
      d.nested = NestedClause{rng.pick(rels), {*inner}};
      const auto found = find_similar_objects(d, story, closure);
      if (unique ? only(found, e.ref)
                 : std::any_of(found.begin(), found.end(), [&](const StoryEntity* s) { return s->ref == e.ref; }))
        out.push_back(std::move(d));
    }
  }
  return out;
}

// A description `e` satisfies but that need not be unique, for indefinite and
// quantified mentions.
EntityDescriptor loose_description(const StoryEntity& e, const Story& story, Rng& rng) {
  const auto forms = forms_of(e, story, false);
  Form f = rng.pick(forms);
  if (!f.shape && rng.chance(0.5)) f.shape = true;
  return build(e, f, rng);
}

std::vector<std::pair<EntityRef, EntityRef>> pairs_for(const Story& story, bool exclude_direct) {
  std::vector<std::pair<EntityRef, EntityRef>> out;
  for (const auto& a : story.objects)
    for (const auto& b : story.objects) {
      if (a.ref == b.ref || a.attrs == b.attrs) continue;
      if (exclude_direct && stated_between(story, a.ref, b.ref)) continue;
      out.emplace_back(a.ref, b.ref);
    }
  return out;
}

std::pair<EntityRef, EntityRef> pick_pair(const Story& story, const EntailedSet& closure,
                                          const QuestionOptions& opts, Rng& rng) {
  auto pairs = pairs_for(story, rng.chance(opts.exclude_direct_probability));
  if (pairs.empty()) pairs = pairs_for(story, false);
  if (pairs.empty()) throw NoValidSelection("no two distinguishable objects");
  std::vector<double> w;
  for (const auto& [a, b] : pairs) w.push_back(entailed_between(a, b, closure).empty() ? 1.0 : opts.related_weight);
  return pairs[rng.weighted(w)];
}

EntityDescriptor definite(const EntityRef& target, const Story& story, const EntailedSet& closure,
                          const QuestionOptions& opts, Rng& rng) {
  return describe_object(target, story, closure, rng.chance(opts.nested_probability), rng);
}

std::string_view start_symbol(std::string_view form) {
  if (form == "fr") return "Q_FR";
  if (form == "fb_has") return "Q_FB_HAS";
  if (form == "fb_not") return "Q_FB_NOT";
  if (form == "co_which") return "Q_CO_WHICH";
  if (form == "co_what") return "Q_CO_WHAT";
  if (form == "yn") return "Q_YN";
  if (form == "yn_any") return "Q_YN_ANY";
  if (form == "yn_all") return "Q_YN_ALL";
  throw GrammarError("no question template for form '" + std::string(form) + "'");
}

LogicalForm fr_form(const Story& story, const EntailedSet& closure, const QuestionOptions& opts, Rng& rng) {
  const auto [x, y] = pick_pair(story, closure, opts, rng);
  return LogicalForm{"fr", {definite(x, story, closure, opts, rng), definite(y, story, closure, opts, rng)}, {}};
}

LogicalForm fb_form(const Story& story, const EntailedSet& closure, const QuestionOptions& opts, Rng& rng) {
  LogicalForm lf;
  lf.form = rng.chance(0.5) ? "fb_has" : "fb_not";
  if (rng.chance(opts.fb_absent_probability)) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      EntityDescriptor d;
      d.determiner = Determiner::A;
      d.shape = static_cast<Shape>(rng.below(3));
      d.color = static_cast<Color>(rng.below(3));
      d.size = static_cast<Size>(rng.below(3));
      if (find_similar_objects(d, story, closure).empty()) {
        lf.args = {d};
        return lf;
      }
    }
  }
  if (story.objects.empty()) throw NoValidSelection("story describes no objects");
  const StoryEntity& x = rng.pick(story.objects);
  EntityDescriptor d;
  if (rng.chance(opts.nested_probability)) {
    const auto nested = nested_descriptions(x, story, closure, false, rng);
    if (!nested.empty()) d = rng.pick(nested);
  }
  if (!d.nested) d = loose_description(x, story, rng);
  d.determiner = Determiner::A;
  lf.args = {d};
  return lf;
}

LogicalForm co_form(const Story& story, const EntailedSet& closure, const QuestionOptions& opts, Rng& rng) {
  if (story.objects.size() < 3) throw NoValidSelection("fewer than three described objects");
  std::vector<const StoryEntity*> anchors;
  for (const auto& a : story.objects) anchors.push_back(&a);
  rng.shuffle(anchors);
  for (const StoryEntity* a : anchors) {
    std::vector<const StoryEntity*> pool;
    std::vector<double> w;
    for (const auto& c : story.objects) {
      if (c.ref == a->ref || c.attrs == a->attrs) continue;
      pool.push_back(&c);
      w.push_back(entailed_between(c.ref, a->ref, closure).empty() ? 1.0 : opts.related_weight);
    }
    if (pool.size() < 2) continue;
    const std::size_t i = rng.weighted(w);
    const StoryEntity* c1 = pool[i];
    w[i] = 0.0;
    for (std::size_t k = 0; k < pool.size(); ++k)
      if (pool[k]->attrs == c1->attrs) w[k] = 0.0;
    const std::size_t j = rng.weighted(w);
    if (j == w.size()) continue;
    const StoryEntity* c2 = pool[j];

    std::vector<RelationKind> rels = entailed_between(c1->ref, a->ref, closure);
    for (const auto& r : entailed_between(c2->ref, a->ref, closure)) rels.push_back(r);
    const bool any = rels.empty() || rng.chance(1.0 / 3.0);
    const RelationKind r = any ? RelationKind{kObjectRelations[rng.below(std::size(kObjectRelations))]}
                               : rng.pick(rels);
    LogicalForm lf;
    lf.form = rng.chance(0.5) ? "co_which" : "co_what";
    lf.args = {definite(a->ref, story, closure, opts, rng), definite(c1->ref, story, closure, opts, rng),
               definite(c2->ref, story, closure, opts, rng)};
    lf.relation = r;
    return lf;
  }
  throw NoValidSelection("no anchor with two distinguishable candidates");
}

LogicalForm yn_form(const Story& story, const EntailedSet& closure, const QuestionOptions& opts, Rng& rng) {
  const auto [x, y] = pick_pair(story, closure, opts, rng);
  const auto rels = entailed_between(x, y, closure);
  RelationKind r{kObjectRelations[rng.below(std::size(kObjectRelations))]};
  const auto target = rng.below(3);
  if (target == 0 && !rels.empty()) {
    r = rng.pick(rels);
  } else if (target == 1 && !rels.empty()) {
    const auto partners = exclusive_partners(rng.pick(rels).type);
    if (!partners.empty()) r = RelationKind{rng.pick(partners)};
  }

  LogicalForm lf;
  lf.form = "yn";
  lf.relation = r;
  lf.args = {definite(x, story, closure, opts, rng), definite(y, story, closure, opts, rng)};
  if (!rng.chance(opts.quantifier_probability)) return lf;

  // Quantify the subject, the object, or both.
  const auto mode = rng.below(3);
  if (mode != 1) {
    EntityDescriptor d = loose_description(entity(story, x), story, rng);
    switch (rng.below(3)) {
      case 0: d.determiner = Determiner::Any; lf.form = "yn_any"; break;
      case 1: d.determiner = Determiner::All; d.number = Number::Plural; lf.form = "yn_all"; break;
      default: d.determiner = Determiner::A; break;
    }
    lf.args[0] = d;
  }
  if (mode != 0) {
    EntityDescriptor d = loose_description(entity(story, y), story, rng);
    d.determiner = Determiner::All;
    d.number = Number::Plural;
    lf.args[1] = d;
  }
  return lf;
}

}  // namespace

std::vector<EntityRef> choose_objects(const Story& story, [[maybe_unused]] const EntailedSet& closure, int n,
                                      const ChooseConstraints& constraints, Rng& rng) {
  if (n < 1 || n > 3) throw NoValidSelection("selection size must be 1..3");
  const auto& objs = story.objects;
  auto compatible = [&](const StoryEntity& a, const StoryEntity& b) {
    if (constraints.no_similar && a.attrs == b.attrs) return false;
    if (constraints.exclude_direct && stated_between(story, a.ref, b.ref)) return false;
    return true;
  };
  std::vector<std::vector<std::size_t>> valid;
  const std::size_t m = objs.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (n == 1) {
      valid.push_back({i});
      continue;
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!compatible(objs[i], objs[j])) continue;
      if (n == 2) {
        valid.push_back({i, j});
        continue;
      }
      for (std::size_t k = j + 1; k < m; ++k)
        if (compatible(objs[i], objs[k]) && compatible(objs[j], objs[k])) valid.push_back({i, j, k});
    }
  }
  if (valid.empty()) throw NoValidSelection("no selection of " + std::to_string(n) + " objects meets the constraints");
  auto chosen = rng.pick(valid);
  rng.shuffle(chosen);
  std::vector<EntityRef> out;
  for (std::size_t i : chosen) out.push_back(objs[i].ref);
  return out;
}

EntityDescriptor describe_object(const EntityRef& target, const Story& story, const EntailedSet& closure,
                                 bool want_nested, Rng& rng) {
  const StoryEntity* e = story.find_object(target.id);
  if (e == nullptr) throw NotDescribable("object " + target.id + " is not described");
  if (want_nested) {
    const auto nested = nested_descriptions(*e, story, closure, true, rng);
    if (!nested.empty()) return rng.pick(nested);
  }
  if (auto d = plain_description(*e, story, closure, rng)) return *d;
  if (!want_nested) {
    const auto nested = nested_descriptions(*e, story, closure, true, rng);
    if (!nested.empty()) return rng.pick(nested);
  }
  throw NotDescribable("no description singles out " + target.id);
}

std::string render_question(const LogicalForm& lf, const Grammar& grammar, Rng& rng) {
  const Lexicon& lex = grammar.lexicon();
  TextBuilder tb;
  for (const Symbol& s : grammar.expand(start_symbol(lf.form), {}, rng)) {
    if (s.kind == SymbolKind::Terminal) {
      tb.token(s.text);
      continue;
    }
    auto arg = [&](std::size_t i) {
      if (i >= lf.args.size()) throw GrammarError("slot " + s.text + " has no argument in " + lf.form);
      tb.words(render_descriptor(lf.args[i], lex));
    };
    if (s.text == "$X" || s.text == "$ANCHOR") arg(0);
    else if (s.text == "$Y" || s.text == "$C1") arg(1);
    else if (s.text == "$C2") arg(2);
    else if (s.text == "$REL" && lf.relation) tb.words(lex.relation(*lf.relation));
    else throw GrammarError("slot " + s.text + " has no filler in a question");
  }
  return tb.finish();
}

std::vector<std::string> question_candidates(QType qtype, const Story& story) {
  switch (qtype) {
    case QType::FR: return fr_candidates();
    case QType::CO: return co_candidates();
    case QType::YN: return yn_candidates();
    case QType::FB: {
      std::vector<std::string> c = story.blocks;
      std::sort(c.begin(), c.end());
      c.emplace_back(labels::kNone);
      return c;
    }
  }
  return {};
}

Question make_question(QType qtype, const Story& story, const EntailedSet& closure, const Grammar& grammar,
                       const QuestionOptions& opts, std::uint64_t seed) {
  Rng rng(seed);
  Question q;
  q.qtype = qtype;
  switch (qtype) {
    case QType::FR: q.logical_form = fr_form(story, closure, opts, rng); break;
    case QType::FB: q.logical_form = fb_form(story, closure, opts, rng); break;
    case QType::CO: q.logical_form = co_form(story, closure, opts, rng); break;
    case QType::YN: q.logical_form = yn_form(story, closure, opts, rng); break;
  }
  q.text = render_question(q.logical_form, grammar, rng);
  q.candidates = question_candidates(qtype, story);
  if (qtype == QType::FR)
    q.eval_excluded = {std::string(fr_label(Relation::FarFrom)), std::string(fr_label(Relation::NearTo))};
  return q;
}

}  // namespace spatialqa
