#include "spatialqa/variants.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spatialqa/answers.hpp"
#include "spatialqa/questions.hpp"
#include "spatialqa/text.hpp"

namespace spatialqa {

namespace {

using nlohmann::json;

constexpr std::string_view kCategories[] = {"shapes", "colors", "sizes", "relations"};

std::vector<std::string> lower_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(text)) out.push_back(to_lower(t.text));
  return out;
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

std::string with_case_of(std::string word, std::string_view model) {
  if (!model.empty() && is_upper(model.front()) && !word.empty() && word.front() >= 'a' && word.front() <= 'z')
    word.front() = static_cast<char>(word.front() - 'a' + 'A');
  return word;
}

struct OutToken {
  std::string gap;
  std::string text;
  std::size_t first = 0;  // old token range
  std::size_t last = 0;
  bool replaced = false;
};

}  // namespace

VocabularyMap VocabularyMap::parse(const std::string& json_text, const std::string& source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(source, e.what());
  }
  if (!j.is_object()) throw SchemaError(source, "expected an object");
  VocabularyMap m;
  m.name_ = j.value("name", std::string("unseen"));
  std::set<std::string> sources;
  for (auto category : kCategories) {
    const std::string cat(category);
    const std::string path = source + "." + cat;
    if (!j.contains(cat)) throw SchemaError(path, "missing");
    if (!j[cat].is_object()) throw SchemaError(path, "expected an object");
    std::set<std::string> targets;
    for (const auto& kv : j[cat].items()) {
      const std::string from = kv.key();
      if (!kv.value().is_string()) throw SchemaError(path + "." + from, "expected a string");
      const std::string t = kv.value().get<std::string>();
      if (from.empty() || t.empty()) throw SchemaError(path + "." + from, "empty phrase");
      if (!targets.insert(t).second) throw SchemaError(path + "." + from, "'" + t + "' is the image of two phrases");
      sources.insert(from);
      m.entries_.push_back({cat, from, t});
    }
  }
  for (const auto& e : m.entries_)
    if (sources.count(e.to)) throw SchemaError(source, "replacement '" + e.to + "' is itself replaced");
  std::stable_sort(m.entries_.begin(), m.entries_.end(), [](const Entry& a, const Entry& b) {
    return count_tokens(a.from) > count_tokens(b.from);
  });
  for (const auto& e : m.entries_) m.from_tokens_.push_back(lower_tokens(e.from));
  return m;
}

VocabularyMap VocabularyMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open vocabulary map");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const VocabularyMap& VocabularyMap::standard() {
  static const VocabularyMap m = load(std::string(SPATIALQA_DATA_DIR) + "/unseen_vocabulary.json");
  return m;
}

std::string VocabularyMap::apply(const std::string& text) const {
  std::vector<std::size_t*> none;
  return apply(text, none);
}

std::string VocabularyMap::apply(const std::string& text, std::vector<std::size_t*>& offsets) const {
  const auto tokens = tokenize(text);
  std::vector<std::string> lower;
  for (const auto& t : tokens) lower.push_back(to_lower(t.text));

  std::vector<OutToken> out;
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < tokens.size();) {
    OutToken o;
    o.gap = text.substr(prev_end, tokens[i].begin - prev_end);
    o.first = o.last = i;
    o.text = tokens[i].text;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      const auto& f = from_tokens_[k];
      if (i + f.size() > tokens.size() || !std::equal(f.begin(), f.end(), lower.begin() + static_cast<std::ptrdiff_t>(i)))
        continue;
      o.last = i + f.size() - 1;
      o.text = with_case_of(entries_[k].to, tokens[i].text);
      o.replaced = true;
      break;
    }
    prev_end = tokens[o.last].end;
    i = o.last + 1;
    out.push_back(std::move(o));
  }

  for (std::size_t k = 1; k < out.size(); ++k) {
    if (!out[k].replaced) continue;
    // Capitalized "A" is an article only at the start of a sentence; elsewhere
    // it names a block.
    const std::string& art = out[k - 1].text;
    const bool initial = k == 1 || out[k - 2].text == "." || out[k - 2].text == "?";
    if (!(art == "a" || art == "an" || (initial && (art == "A" || art == "An")))) continue;
    const std::string next = to_lower(out[k].text.substr(0, out[k].text.find(' ')));
    out[k - 1].text = with_case_of(std::string(indefinite_article(next)), out[k - 1].text);
  }

  std::string result;
  std::vector<std::size_t> new_begin(tokens.size()), new_end(tokens.size());
  for (const auto& o : out) {
    result += o.gap;
    for (std::size_t i = o.first; i <= o.last; ++i) new_begin[i] = result.size();
    result += o.text;
    for (std::size_t i = o.first; i <= o.last; ++i) new_end[i] = result.size();
  }
  result += text.substr(prev_end);

  for (std::size_t* p : offsets) {
    std::size_t v = *p;
    if (v >= text.size()) {
      *p = result.size() - (text.size() - std::min(v, text.size()));
      continue;
    }
    bool moved = false;
    for (std::size_t i = 0; i < tokens.size() && !moved; ++i) {
      if (tokens[i].begin == v) *p = new_begin[i], moved = true;
      else if (tokens[i].end == v) *p = new_end[i], moved = true;
    }
    if (!moved) throw Error("offset " + std::to_string(v) + " is not at a token boundary");
  }
  return result;
}

Grammar VocabularyMap::rewrite(const Grammar& g) const {
  return g.with_lexicon(g.lexicon().rewritten([this](const std::string& s) { return apply(s); }));
}

DatasetRecord make_unseen(const DatasetRecord& record, const VocabularyMap& map, double fraction,
                          std::uint64_t seed) {
  Rng rng(derive_seed(seed, fnv1a(record.id)));
  if (!rng.chance(fraction)) return record;

  DatasetRecord r = record;
  const std::vector<Sentence> original = record.story.sentences;
  for (auto& s : r.story.sentences) {
    std::vector<std::size_t*> offs;
    for (auto& sp : s.spans)
      for (Span* x : {&sp.trajector, &sp.indicator, &sp.landmark}) {
        offs.push_back(&x->begin);
        offs.push_back(&x->end);
      }
    s.text = map.apply(s.text, offs);
  }
  r.story.token_count = count_tokens(r.story.text());

  for (auto& ann : r.annotations.sprl) {
    if (ann.sentence >= original.size()) continue;
    std::vector<std::size_t*> offs;
    for (auto& t : ann.triplets)
      for (Span* x : {&t.trajector, &t.indicator, &t.landmark}) {
        offs.push_back(&x->begin);
        offs.push_back(&x->end);
      }
    map.apply(original[ann.sentence].text, offs);
    const std::string& text = r.story.sentences[ann.sentence].text;
    for (auto& t : ann.triplets) {
      t.trajector_text = text.substr(t.trajector.begin, t.trajector.length());
      t.indicator_text = text.substr(t.indicator.begin, t.indicator.length());
      t.landmark_text = text.substr(t.landmark.begin, t.landmark.length());
    }
  }

  for (auto& q : r.questions) q.text = map.apply(q.text);
  for (auto* items : {&r.variants.consistency, &r.variants.contrast})
    for (auto& v : *items) v.question.text = map.apply(v.question.text);
  r.vocabulary = map.name();
  r.variants.unseen = UnseenInfo{map.name(), record.id};
  return r;
}

namespace {

bool universal(const EntityDescriptor& d) {
  return d.determiner == Determiner::All || (d.determiner == Determiner::The && d.number == Number::Plural);
}

RelationKind converse_kind(const RelationKind& r) { return RelationKind{converse(r.type).value_or(r.type), r.edge}; }

std::set<std::string> match_ids(const EntityDescriptor& d, const Story& story, const EntailedSet& closure) {
  std::set<std::string> out;
  for (const StoryEntity* e : find_similar_objects(d, story, closure)) out.insert(e->ref.id);
  return out;
}

std::string converse_fr_label(const std::string& label) {
  if (label == labels::kDK) return label;
  return std::string(fr_label(converse_kind(*relation_from_fr_label(label)).type));
}

std::vector<std::string> in_candidate_order(std::vector<std::string> labels) {
  const auto& order = fr_candidates();
  auto rank = [&](const std::string& l) {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), l) - order.begin());
  };
  std::stable_sort(labels.begin(), labels.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
  return labels;
}

std::string yn_form_for(const EntityDescriptor& subject) {
  if (subject.determiner == Determiner::Any) return "yn_any";
  if (subject.determiner == Determiner::All) return "yn_all";
  return "yn";
}

VariantItem item(const Question& pivot, std::size_t pivot_index, std::string edit, LogicalForm lf,
                 const Grammar& grammar, Rng& rng) {
  VariantItem v;
  v.pivot = pivot_index;
  v.edit = std::move(edit);
  v.question.qtype = pivot.qtype;
  v.question.logical_form = std::move(lf);
  v.question.text = render_question(v.question.logical_form, grammar, rng);
  v.question.candidates = pivot.candidates;
  v.question.eval_excluded = pivot.eval_excluded;
  return v;
}

// Descriptors obtained by dropping, adding or generalizing one attribute.
std::vector<EntityDescriptor> attribute_edits(const EntityDescriptor& d, const Story& story) {
  std::vector<EntityDescriptor> out;
  auto push = [&](EntityDescriptor x) {
    if (!(x == d) && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  };
  if (d.color) { auto x = d; x.color.reset(); push(x); }
  if (d.size) { auto x = d; x.size.reset(); push(x); }
  if (d.shape) {
    for (Hypernym h : {Hypernym::Object, Hypernym::Shape, Hypernym::Thing}) {
      auto x = d;
      x.shape.reset();
      x.hypernym = h;
      push(x);
    }
  }
  for (const auto& e : story.objects) {
    if (!d.shape) { auto x = d; x.shape = e.attrs.shape; x.hypernym = Hypernym::None; push(x); }
    if (!d.color && e.attrs.color) { auto x = d; x.color = e.attrs.color; push(x); }
    if (!d.size && e.attrs.size) { auto x = d; x.size = e.attrs.size; push(x); }
    if (d.color && e.attrs.color && e.attrs.color != d.color) { auto x = d; x.color = e.attrs.color; push(x); }
    if (d.size && e.attrs.size && e.attrs.size != d.size) { auto x = d; x.size = e.attrs.size; push(x); }
  }
  return out;
}

std::vector<RelationKind> relation_edits(const RelationKind& r) {
  std::vector<RelationKind> out;
  const RelationKind c = converse_kind(r);
  if (c != r) out.push_back(c);
  for (Relation x : exclusive_partners(r.type))
    if (std::find(out.begin(), out.end(), RelationKind{x}) == out.end()) out.push_back(RelationKind{x});
  return out;
}

EntityDescriptor all_of_kind(const EntityDescriptor& d) {
  EntityDescriptor x;
  x.shape = d.shape;
  x.hypernym = d.shape ? Hypernym::None : Hypernym::Object;
  x.determiner = Determiner::All;
  x.number = Number::Plural;
  return x;
}

}  // namespace

std::vector<VariantItem> make_consistency(const Question& pivot, std::size_t pivot_index, const Story& story,
                                          const EntailedSet& closure, const Grammar& grammar, Rng& rng) {
  std::vector<VariantItem> out;
  const LogicalForm& lf = pivot.logical_form;
  switch (pivot.qtype) {
    case QType::FR: {
      LogicalForm s = lf;
      std::swap(s.args[0], s.args[1]);
      out.push_back(item(pivot, pivot_index, "swap_arguments", s, grammar, rng));
      break;
    }
    case QType::YN: {
      const EntityDescriptor& x = lf.args[0];
      const EntityDescriptor& y = lf.args[1];
      const auto mx = match_ids(x, story, closure);
      const auto my = match_ids(y, story, closure);
      bool disjoint = true;
      for (const auto& id : mx) disjoint = disjoint && !my.count(id);
      // Swapping quantifier scope is sound when both quantifiers agree, or when
      // one side is a single object and the sides cannot coincide.
      const bool sound = universal(x) == universal(y) || (disjoint && (mx.size() == 1 || my.size() == 1));
      if (!sound) break;
      LogicalForm s = lf;
      std::swap(s.args[0], s.args[1]);
      s.relation = converse_kind(*lf.relation);
      s.form = yn_form_for(s.args[0]);
      out.push_back(item(pivot, pivot_index, "swap_arguments", s, grammar, rng));
      break;
    }
    case QType::CO: {
      LogicalForm s = lf;
      std::swap(s.args[1], s.args[2]);
      out.push_back(item(pivot, pivot_index, "swap_candidates", s, grammar, rng));
      break;
    }
    case QType::FB: {
      const auto target = match_ids(lf.args[0], story, closure);
      for (const auto& d : attribute_edits(lf.args[0], story)) {
        if (match_ids(d, story, closure) != target) continue;
        LogicalForm s = lf;
        s.args[0] = d;
        out.push_back(item(pivot, pivot_index, "equivalent_description", s, grammar, rng));
      }
      break;
    }
  }
  if (out.empty()) throw NoVariant("no consistency rewrite applies to the " + lf.form + " question");
  for (auto& v : out) {
    v.question.gold.labels = expected_consistency_gold(pivot, v);
    v.question.reasoning_depth = pivot.reasoning_depth;
  }
  return out;
}

std::vector<VariantItem> make_contrast(const Question& pivot, std::size_t pivot_index, const Story& story,
                                       const EntailedSet& closure, const Grammar& grammar, Rng& rng) {
  const LogicalForm& lf = pivot.logical_form;
  std::vector<std::pair<std::string, LogicalForm>> edits;
  auto add = [&](const char* tag, LogicalForm x) { edits.emplace_back(tag, std::move(x)); };

  if (pivot.qtype == QType::YN || pivot.qtype == QType::CO) {
    for (const auto& r : relation_edits(*lf.relation)) {
      LogicalForm x = lf;
      x.relation = r;
      add(r == converse_kind(*lf.relation) ? "relation_converse" : "relation_exclusive", x);
    }
  }
  if (pivot.qtype == QType::YN) {
    if (!universal(lf.args[1])) {
      LogicalForm x = lf;
      x.args[1] = all_of_kind(lf.args[1]);
      add("quantify_object", x);
    }
    if (!universal(lf.args[0])) {
      LogicalForm x = lf;
      x.args[0] = all_of_kind(lf.args[0]);
      x.form = "yn_all";
      add("quantify_subject", x);
    }
  }
  if (pivot.qtype != QType::FB) {
    // Attribute tweaks keep the determiner, so a definite mention must still
    // pick out one object; answer() rejects those that do not.
    const std::size_t n = pivot.qtype == QType::YN ? 2 : lf.args.size();
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& d : attribute_edits(lf.args[i], story)) {
        LogicalForm x = lf;
        x.args[i] = d;
        add("attribute_tweak", x);
      }
  }

  std::vector<VariantItem> out;
  std::set<std::string> seen_text;
  for (auto& [tag, x] : edits) {
    AnswerSet gold;
    try {
      gold = answer(x, story, closure);
    } catch (const UnresolvedMention&) {
      continue;
    }
    if (gold.labels == pivot.gold.labels || gold.vacuous) continue;
    VariantItem v = item(pivot, pivot_index, tag, std::move(x), grammar, rng);
    if (!seen_text.insert(v.question.text).second) continue;
    v.question.gold = gold;
    v.question.reasoning_depth = reasoning_depth(gold);
    out.push_back(std::move(v));
  }
  if (out.empty()) throw NoVariant("every single edit of the " + lf.form + " question keeps its answer");
  return out;
}

std::vector<std::string> expected_consistency_gold(const Question& pivot, const VariantItem& item) {
  const auto& labels = pivot.gold.labels;
  if (item.edit == "swap_arguments" && pivot.qtype == QType::FR) {
    std::vector<std::string> out;
    for (const auto& l : labels) out.push_back(converse_fr_label(l));
    return in_candidate_order(out);
  }
  if (item.edit == "swap_candidates") {
    std::vector<std::string> out;
    for (const auto& l : labels) {
      if (l == labels::kObject1) out.emplace_back(labels::kObject2);
      else if (l == labels::kObject2) out.emplace_back(labels::kObject1);
      else out.push_back(l);
    }
    return out;
  }
  return labels;
}

}  // namespace spatialqa
