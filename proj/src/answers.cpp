#include "spatialqa/answers.hpp"

#include <algorithm>

#include "spatialqa/phrase.hpp"

namespace spatialqa {

namespace {

const StoryEntity& unique(const EntityDescriptor& d, const Story& story, const EntailedSet& closure,
                          const char* role) {
  const auto found = find_similar_objects(d, story, closure);
  if (found.size() != 1)
    throw UnresolvedMention(std::string(role) + " matches " + std::to_string(found.size()) + " objects");
  return *found.front();
}

const LogicalForm& require_args(const LogicalForm& lf, std::size_t n, bool relation) {
  if (lf.args.size() != n) throw UnresolvedMention(lf.form + " expects " + std::to_string(n) + " arguments");
  if (relation && !lf.relation) throw UnresolvedMention(lf.form + " without a relation");
  return lf;
}

void justify(AnswerSet& out, const Fact& f, const EntailedSet& closure) {
  if (auto d = closure.depth(f)) out.justification.push_back({f, *d});
}

// The fact that settles relation_status when it is not Unknown.
void justify_status(AnswerSet& out, const EntityRef& a, const EntityRef& b, const RelationKind& r,
                    const EntailedSet& closure) {
  const Fact pos{a, r, b};
  if (closure.contains(pos)) {
    justify(out, pos, closure);
    return;
  }
  std::optional<Justification> best;
  for (Relation x : exclusive_partners(r.type)) {
    const Fact f{a, RelationKind{x}, b};
    if (auto d = closure.depth(f); d && (!best || *d < best->depth)) best = Justification{f, *d};
  }
  if (best) out.justification.push_back(*best);
}

bool universal(const EntityDescriptor& d) {
  return d.determiner == Determiner::All || (d.determiner == Determiner::The && d.number == Number::Plural);
}

void dedupe(std::vector<Justification>& js) {
  std::vector<Justification> out;
  for (auto& j : js)
    if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
  js = std::move(out);
}

}  // namespace

std::vector<const StoryEntity*> find_similar_objects(const EntityDescriptor& d, const Story& story,
                                                     const EntailedSet& closure) {
  return resolve(d, story.objects, closure);
}

AnswerSet answer_fr(const LogicalForm& lf, const Story& story, const EntailedSet& closure) {
  require_args(lf, 2, false);
  const StoryEntity& x = unique(lf.args[0], story, closure, "first argument");
  const StoryEntity& y = unique(lf.args[1], story, closure, "second argument");
  AnswerSet out;
  for (const auto& label : fr_candidates()) {
    const RelationKind r{*relation_from_fr_label(label)};
    const Fact f{x.ref, r, y.ref};
    if (x.ref != y.ref && closure.contains(f)) {
      out.labels.push_back(label);
      justify(out, f, closure);
    }
  }
  if (out.labels.empty()) out.labels.emplace_back(labels::kDK);
  return out;
}

AnswerSet answer_fb(const LogicalForm& lf, const Story& story, const EntailedSet& closure) {
  require_args(lf, 1, false);
  const EntityDescriptor& d = lf.args[0];
  std::vector<const StoryEntity*> matches;
  if (d.determiner == Determiner::The && d.number == Number::Singular)
    matches = {&unique(d, story, closure, "argument")};
  else
    matches = find_similar_objects(d, story, closure);

  std::vector<std::string> blocks = story.blocks;
  std::sort(blocks.begin(), blocks.end());
  AnswerSet out;
  const bool negative = lf.form == "fb_not";
  if (negative && matches.empty()) out.vacuous = true;
  for (const auto& b : blocks) {
    const EntityRef block = EntityRef::block(b);
    if (negative) {
      const bool all_out = std::all_of(matches.begin(), matches.end(),
                                       [&](const StoryEntity* e) { return closure.excluded_from(e->ref, block); });
      if (!all_out) continue;
      out.labels.push_back(b);
      for (const StoryEntity* e : matches) justify(out, Fact{e->ref, Relation::In, EntityRef::block(e->block)}, closure);
    } else {
      bool any = false;
      for (const StoryEntity* e : matches) {
        const Fact f{e->ref, Relation::In, block};
        if (closure.contains(f)) {
          any = true;
          justify(out, f, closure);
        }
      }
      if (any) out.labels.push_back(b);
    }
  }
  if (out.labels.empty()) out.labels.emplace_back(labels::kNone);
  dedupe(out.justification);
  return out;
}

AnswerSet answer_co(const LogicalForm& lf, const Story& story, const EntailedSet& closure) {
  require_args(lf, 3, true);
  const StoryEntity& anchor = unique(lf.args[0], story, closure, "anchor");
  const StoryEntity& c1 = unique(lf.args[1], story, closure, "first candidate");
  const StoryEntity& c2 = unique(lf.args[2], story, closure, "second candidate");
  AnswerSet out;
  auto holds = [&](const StoryEntity& c) {
    if (c.ref == anchor.ref) return false;
    const Fact f{c.ref, *lf.relation, anchor.ref};
    if (!closure.contains(f)) return false;
    justify(out, f, closure);
    return true;
  };
  const bool a = holds(c1);
  const bool b = holds(c2);
  if (a && b) out.labels.emplace_back(labels::kBoth);
  else if (a) out.labels.emplace_back(labels::kObject1);
  else if (b) out.labels.emplace_back(labels::kObject2);
  else out.labels.emplace_back(labels::kNone);
  return out;
}

AnswerSet answer_yn(const LogicalForm& lf, const Story& story, const EntailedSet& closure) {
  require_args(lf, 2, true);
  const EntityDescriptor& dx = lf.args[0];
  const EntityDescriptor& dy = lf.args[1];
  const auto xs = find_similar_objects(dx, story, closure);
  const auto ys = find_similar_objects(dy, story, closure);
  const bool all_x = universal(dx);
  const bool all_y = universal(dy);
  const RelationKind r = *lf.relation;

  AnswerSet out;
  // Per-pair statuses are kept so the deciding facts can be cited.
  std::vector<std::pair<const StoryEntity*, const StoryEntity*>> pairs;
  std::vector<ThreeValued> status;
  ThreeValued outer = all_x ? ThreeValued::True : ThreeValued::False;
  if (xs.empty() && all_x) out.vacuous = true;
  for (const StoryEntity* x : xs) {
    ThreeValued inner = all_y ? ThreeValued::True : ThreeValued::False;
    bool any_y = false;
    for (const StoryEntity* y : ys) {
      if (y->ref == x->ref) continue;
      any_y = true;
      const ThreeValued v = relation_status(x->ref, y->ref, r, closure);
      pairs.emplace_back(x, y);
      status.push_back(v);
      inner = all_y ? logical_and(inner, v) : logical_or(inner, v);
    }
    if (!any_y && all_y) out.vacuous = true;
    outer = all_x ? logical_and(outer, inner) : logical_or(outer, inner);
  }

  switch (outer) {
    case ThreeValued::True: out.labels.emplace_back(labels::kYes); break;
    case ThreeValued::False: out.labels.emplace_back(labels::kNo); break;
    default: out.labels.emplace_back(labels::kDK); break;
  }
  if (outer != ThreeValued::Unknown)
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (status[i] == outer) justify_status(out, pairs[i].first->ref, pairs[i].second->ref, r, closure);
  dedupe(out.justification);
  return out;
}

AnswerSet answer(const LogicalForm& lf, const Story& story, const EntailedSet& closure) {
  if (lf.form == "fr") return answer_fr(lf, story, closure);
  if (lf.form == "fb_has" || lf.form == "fb_not") return answer_fb(lf, story, closure);
  if (lf.form == "co_which" || lf.form == "co_what") return answer_co(lf, story, closure);
  if (lf.form == "yn" || lf.form == "yn_any" || lf.form == "yn_all") return answer_yn(lf, story, closure);
  throw UnresolvedMention("unknown question form '" + lf.form + "'");
}

int reasoning_depth(const AnswerSet& a) {
  int d = 0;
  for (const auto& j : a.justification) d = std::max(d, j.depth);
  return d;
}

}  // namespace spatialqa
