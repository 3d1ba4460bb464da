#include "spatialqa/realizer.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "spatialqa/algebra.hpp"
#include "spatialqa/phrase.hpp"
#include "spatialqa/rng.hpp"
#include "spatialqa/text.hpp"

namespace spatialqa {

Fact canonical_fact(const Fact& f) {
  if (auto c = converse(f.relation.type); c && f.object < f.subject)
    return Fact{f.object, RelationKind{*c}, f.subject, f.polarity};
  return f;
}

std::vector<Fact> canonical_facts(const std::vector<Fact>& facts) {
  std::vector<Fact> out;
  out.reserve(facts.size());
  for (const auto& f : facts) out.push_back(canonical_fact(f));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

enum class Kind { IntroOne, IntroMany, BlockRel, Has, EdgeMsg, ObjRel };

std::string_view start_symbol(Kind k) {
  switch (k) {
    case Kind::IntroOne: return "INTRO_ONE";
    case Kind::IntroMany: return "INTRO_MANY";
    case Kind::BlockRel: return "BLOCK_REL";
    case Kind::Has: return "HAS";
    case Kind::EdgeMsg: return "EDGE";
    default: return "OBJ_REL";
  }
}

struct Message {
  Kind kind = Kind::ObjRel;
  std::string block;                   // paragraph block
  std::vector<std::string> subjects;   // object ids or block names
  std::vector<RelationKind> relations;
  std::vector<std::string> objects;    // landmarks (object ids or block names)
  std::vector<std::vector<std::string>> items;  // Has: groups of object ids
};

struct Spans {
  Span subject;
  std::vector<Span> relations;
  std::vector<Span> objects;
  std::vector<Span> items;
  Span block;
  Span indicator;
  bool has_indicator = false;
  Span this_block;
  bool has_this_block = false;
};

class Realizer {
 public:
  Realizer(const Scene& scene, const std::vector<Fact>& facts, const Grammar& grammar,
           const RealizerOptions& opts, std::uint64_t seed)
      : scene_(scene), input_(facts), grammar_(grammar), lex_(grammar.lexicon()), opts_(opts), rng_(seed) {}

  Story run() {
    check_and_index();
    describe_objects();
    orient_facts();
    plan();
    for (const auto& m : messages_) render(m);
    for (const auto& f : oriented_)
      if (!fact_index_.count(f)) throw UncoverableFact("fact was not verbalized: " + to_string(f));
    story_.token_count = count_tokens(story_.text());
    return std::move(story_);
  }

 private:
  // -------------------------------------------------------------------------
  // Preparation
  // -------------------------------------------------------------------------

  void check_and_index() {
    for (const auto& f : input_) {
      if (auto v = fact_violation(f); !v.empty()) throw UncoverableFact(v);
      if (f.polarity == Polarity::Negative)
        throw UncoverableFact("no sentence form states a negated fact: " + to_string(f));
      for (const EntityRef* e : {&f.subject, &f.object})
        if (e->is_block()) blocks_.insert(e->id);
      if (f.relation.type == Relation::In) {
        auto [it, fresh] = home_.emplace(f.subject.id, f.object.id);
        if (!fresh && it->second != f.object.id)
          throw UncoverableFact("object " + f.subject.id + " is placed in two blocks");
      }
    }
    for (const auto& f : input_) {
      for (const EntityRef* e : {&f.subject, &f.object}) {
        if (e->is_block()) continue;
        if (!home_.count(e->id)) throw UncoverableFact("object " + e->id + " has no containing block");
        if (scene_.find_object(e->id) == nullptr)
          throw UncoverableFact("object " + e->id + " is not part of the scene");
      }
      if (!f.subject.is_block() && !f.object.is_block() && home_[f.subject.id] != home_[f.object.id])
        throw UncoverableFact("relations between objects of different blocks have no sentence form: " +
                              to_string(f));
    }
  }

  void describe_objects() {
    std::map<std::string, std::vector<std::string>> per_block;
    for (const auto& [id, block] : home_) per_block[block].push_back(id);
    for (auto& [block, ids] : per_block) {
      std::sort(ids.begin(), ids.end());
      std::map<std::string, Attribute> attrs;
      for (const auto& id : ids) {
        const Attribute& full = scene_.find_object(id)->attrs;
        Attribute a{full.shape, std::nullopt, std::nullopt};
        if (full.color && rng_.chance(opts_.color_probability)) a.color = full.color;
        if (full.size && rng_.chance(opts_.size_probability)) a.size = full.size;
        attrs[id] = a;
      }
      // A description that is a strict subset of another one could never be
      // resolved uniquely, so such objects get their full description.
      for (bool changed = true; changed;) {
        changed = false;
        for (const auto& x : ids)
          for (const auto& y : ids) {
            if (x == y) continue;
            const Attribute& ax = attrs[x];
            const Attribute& ay = attrs[y];
            const bool subset = ax.shape == ay.shape && (!ax.color || ax.color == ay.color) &&
                                (!ax.size || ax.size == ay.size);
            if (subset && !(ax == ay)) {
              attrs[x] = scene_.find_object(x)->attrs;
              changed = true;
            }
          }
      }
      std::map<Attribute, std::vector<std::string>> groups;
      for (const auto& id : ids) groups[attrs[id]].push_back(id);
      for (const auto& id : ids) {
        const auto& group = groups[attrs[id]];
        int ordinal = 0;
        if (group.size() > 1)
          ordinal = static_cast<int>(std::find(group.begin(), group.end(), id) - group.begin()) + 1;
        entities_[id] = StoryEntity{EntityRef::object(id), attrs[id], block, ordinal};
        group_of_[id] = group;
      }
    }
    for (const auto& [id, e] : entities_) story_.objects.push_back(e);
    story_.blocks.assign(blocks_.begin(), blocks_.end());
  }

  void orient_facts() {
    std::set<Fact> seen;
    for (const auto& f : input_) {
      const Fact c = canonical_fact(f);
      if (!seen.insert(c).second) continue;
      Fact chosen = c;
      if (auto conv = converse(c.relation.type); conv && rng_.chance(0.5))
        chosen = Fact{c.object, RelationKind{*conv}, c.subject, c.polarity};
      oriented_.push_back(chosen);
    }
  }

  // -------------------------------------------------------------------------
  // Planning
  // -------------------------------------------------------------------------

  void plan() {
    if (blocks_.empty()) return;
    Message intro;
    intro.kind = blocks_.size() == 1 ? Kind::IntroOne : Kind::IntroMany;
    intro.objects.assign(blocks_.begin(), blocks_.end());
    messages_.push_back(intro);

    std::vector<Message> block_rels;
    for (const auto& f : oriented_) {
      if (!f.subject.is_block() || !f.object.is_block()) continue;
      Message* target = nullptr;
      for (auto& m : block_rels)
        if (m.subjects.front() == f.subject.id && m.relations.front() == f.relation) target = &m;
      if (target != nullptr && rng_.chance(opts_.object_conjunction_probability)) {
        target->objects.push_back(f.object.id);
        continue;
      }
      Message m;
      m.kind = Kind::BlockRel;
      m.subjects = {f.subject.id};
      m.relations = {f.relation};
      m.objects = {f.object.id};
      block_rels.push_back(m);
    }
    messages_.insert(messages_.end(), block_rels.begin(), block_rels.end());

    for (const auto& block : blocks_) plan_block(block);
  }

  void plan_block(const std::string& block) {
    std::vector<std::string> ids;
    for (const auto& [id, b] : home_)
      if (b == block) ids.push_back(id);
    if (ids.empty()) return;

    std::map<std::pair<std::string, std::string>, std::vector<RelationKind>> pair_rels;
    std::vector<std::pair<std::string, std::string>> pair_order;
    std::vector<Fact> edges;
    std::set<std::string> related;
    for (const auto& f : oriented_) {
      if (f.subject.is_block() || home_[f.subject.id] != block) continue;
      if (f.relation.type == Relation::TouchingEdge) {
        edges.push_back(f);
        related.insert(f.subject.id);
      } else if (!f.object.is_block()) {
        auto key = std::pair{f.subject.id, f.object.id};
        if (!pair_rels.count(key)) pair_order.push_back(key);
        pair_rels[key].push_back(f.relation);
        related.insert(f.subject.id);
        related.insert(f.object.id);
      }
    }

    std::set<std::string> in_has;
    for (const auto& id : ids)
      if (group_of_[id].size() > 1 || !related.count(id) || rng_.chance(opts_.introduce_in_has_probability))
        in_has.insert(id);
    if (in_has.empty()) in_has.insert(ids.front());

    Message has;
    has.kind = Kind::Has;
    has.block = block;
    std::set<std::string> placed;
    for (const auto& id : ids) {
      if (!in_has.count(id) || placed.count(id)) continue;
      has.items.push_back(group_of_[id]);
      placed.insert(group_of_[id].begin(), group_of_[id].end());
    }
    messages_.push_back(has);

    std::vector<Message> rel_msgs;
    for (const auto& key : pair_order) {
      auto rels = pair_rels[key];
      std::sort(rels.begin(), rels.end());
      if (rels.size() > 1 && rng_.chance(opts_.split_relations_probability)) {
        for (const auto& r : rels) rel_msgs.push_back(obj_rel(block, key.first, {r}, key.second));
      } else {
        rel_msgs.push_back(obj_rel(block, key.first, rels, key.second));
      }
    }

    // Identical objects sharing one relation to the same landmark speak as a group.
    std::set<std::vector<std::string>> groups;
    for (const auto& id : ids)
      if (group_of_[id].size() > 1) groups.insert(group_of_[id]);
    for (const auto& group : groups) {
      std::map<std::pair<RelationKind, std::string>, std::vector<std::size_t>> shared;
      for (std::size_t i = 0; i < rel_msgs.size(); ++i) {
        const auto& m = rel_msgs[i];
        if (m.subjects.size() == 1 && m.relations.size() == 1 && m.objects.size() == 1 &&
            std::find(group.begin(), group.end(), m.subjects.front()) != group.end())
          shared[{m.relations.front(), m.objects.front()}].push_back(i);
      }
      std::set<std::size_t> drop;
      for (const auto& [key, idx] : shared) {
        if (idx.size() != group.size() || !rng_.chance(opts_.group_subject_probability)) continue;
        rel_msgs[idx.front()].subjects = group;
        drop.insert(idx.begin() + 1, idx.end());
      }
      erase_indices(rel_msgs, drop);
    }

    // Object conjunction among single-relation messages with one subject.
    std::set<std::size_t> drop;
    for (std::size_t i = 0; i < rel_msgs.size(); ++i) {
      if (drop.count(i)) continue;
      for (std::size_t j = i + 1; j < rel_msgs.size(); ++j) {
        if (drop.count(j)) continue;
        auto& a = rel_msgs[i];
        const auto& b = rel_msgs[j];
        if (a.subjects.size() == 1 && b.subjects == a.subjects && a.relations.size() == 1 &&
            b.relations == a.relations && rng_.chance(opts_.object_conjunction_probability)) {
          a.objects.push_back(b.objects.front());
          drop.insert(j);
        }
      }
    }
    erase_indices(rel_msgs, drop);

    for (const auto& f : edges) {
      Message m;
      m.kind = Kind::EdgeMsg;
      m.block = block;
      m.subjects = {f.subject.id};
      m.relations = {f.relation};
      m.objects = {block};
      rel_msgs.push_back(m);
    }
    rng_.shuffle(rel_msgs);
    messages_.insert(messages_.end(), rel_msgs.begin(), rel_msgs.end());
  }

  static Message obj_rel(const std::string& block, const std::string& s, std::vector<RelationKind> rels,
                         const std::string& o) {
    Message m;
    m.kind = Kind::ObjRel;
    m.block = block;
    m.subjects = {s};
    m.relations = std::move(rels);
    m.objects = {o};
    return m;
  }

  static void erase_indices(std::vector<Message>& v, const std::set<std::size_t>& drop) {
    std::vector<Message> kept;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!drop.count(i)) kept.push_back(std::move(v[i]));
    v = std::move(kept);
  }

  // -------------------------------------------------------------------------
  // Rendering
  // -------------------------------------------------------------------------

  std::vector<Symbol> expand(std::string_view nt, const std::set<std::string>& conds) {
    try {
      return grammar_.expand(nt, conds, rng_);
    } catch (const GrammarError& e) {
      throw UncoverableFact(e.what());
    }
  }

  const EntailedSet& prior_closure() {
    if (closure_size_ != story_.facts.size()) {
      ClosureOptions co;
      co.touching_implies_near = opts_.touching_implies_near;
      closure_ = closure(story_.facts, co);
      closure_size_ = story_.facts.size();
    }
    return closure_;
  }

  std::vector<StoryEntity> block_pool(const std::string& block) const {
    std::vector<StoryEntity> pool;
    for (const auto& [id, e] : entities_)
      if (e.block == block) pool.push_back(e);
    return pool;
  }

  // Every definite description of `id` that is unique among its block.
  std::vector<EntityDescriptor> plain_descriptions(const std::string& id) {
    const StoryEntity& x = entities_.at(id);
    const auto pool = block_pool(x.block);
    std::vector<EntityDescriptor> out;
    for (int noun = 0; noun < 4; ++noun)
      for (int use_color = 0; use_color < 2; ++use_color)
        for (int use_size = 0; use_size < 2; ++use_size) {
          if (use_color && !x.attrs.color) continue;
          if (use_size && !x.attrs.size) continue;
          EntityDescriptor d;
          d.determiner = Determiner::The;
          if (noun == 0) d.shape = x.attrs.shape;
          else d.hypernym = static_cast<Hypernym>(noun);
          if (use_color) d.color = x.attrs.color;
          if (use_size) d.size = x.attrs.size;
          d.ordinal = x.ordinal;
          std::size_t n = 0;
          for (const auto& e : pool) n += matches_attributes(e, d) ? 1 : 0;
          if (n == 1) out.push_back(d);
        }
    return out;
  }

  EntityDescriptor pick_description(const std::string& id) {
    auto all = plain_descriptions(id);
    std::vector<EntityDescriptor> by_shape;
    std::vector<EntityDescriptor> by_hypernym;
    for (auto& d : all) (d.shape ? by_shape : by_hypernym).push_back(d);
    if (!by_hypernym.empty() && rng_.chance(opts_.hypernym_probability)) return rng_.pick(by_hypernym);
    if (by_shape.empty()) throw UncoverableFact("object " + id + " has no unique description");
    return rng_.pick(by_shape);
  }

  std::optional<EntityDescriptor> nested_description(const std::string& id,
                                                     const std::set<std::string>& avoid) {
    const StoryEntity& x = entities_.at(id);
    const EntailedSet& cl = prior_closure();
    const auto pool = block_pool(x.block);
    std::vector<EntityDescriptor> options;
    for (const auto& y : pool) {
      const std::string& yid = y.ref.id;
      if (yid == id || avoid.count(yid) || !introduced_before_.count(yid)) continue;
      for (Relation r : kObjectRelations) {
        if (relation_status(x.ref, y.ref, r, cl) != ThreeValued::True) continue;
        for (int head = 0; head < 2; ++head) {
          EntityDescriptor d;
          d.determiner = Determiner::The;
          if (head == 0) d.shape = x.attrs.shape;
          else d.hypernym = Hypernym::Object;
          std::size_t n = 0;
          for (const auto& e : pool)
            if (e.ref != y.ref && matches_attributes(e, d) &&
                relation_status(e.ref, y.ref, r, cl) == ThreeValued::True)
              ++n;
          if (n != 1) continue;
          d.nested = NestedClause{RelationKind{r}, {pick_description(yid)}};
          options.push_back(d);
        }
      }
    }
    if (options.empty()) return std::nullopt;
    return rng_.pick(options);
  }

  struct SentenceState {
    std::vector<std::size_t> fact_ids;
    std::vector<EntityRef> entities;
    std::set<std::string> mentioned_now;
  };

  void note_entity(SentenceState& st, const EntityRef& e) {
    if (std::find(st.entities.begin(), st.entities.end(), e) == st.entities.end()) st.entities.push_back(e);
  }

  std::size_t state_fact(const Fact& f, SentenceState& st) {
    auto it = fact_index_.find(f);
    if (it != fact_index_.end()) return it->second;
    const std::size_t id = story_.facts.size();
    story_.facts.push_back(f);
    fact_index_.emplace(f, id);
    st.fact_ids.push_back(id);
    return id;
  }

  const Fact& in_fact(const std::string& id) const {
    for (const auto& f : oriented_)
      if (f.relation.type == Relation::In && f.subject.id == id) return f;
    throw UncoverableFact("object " + id + " has no containing block");
  }

  // Text of an object mention; introduces the object when it is new.
  std::string object_mention(const std::string& id, bool subject, const std::set<std::string>& avoid,
                             SentenceState& st) {
    note_entity(st, EntityRef::object(id));
    if (!introduced_.count(id)) {
      introduced_.insert(id);
      pending_in_.push_back(id);
      return render_item(entities_.at(id).attrs, 1, lex_);
    }
    if (subject && last_subject_ == id && rng_.chance(opts_.pronoun_probability)) return "it";
    if (!subject && introduced_before_.count(id) && rng_.chance(opts_.nested_mention_probability))
      if (auto d = nested_description(id, avoid)) return render_descriptor(*d, lex_);
    return render_descriptor(pick_description(id), lex_);
  }

  std::string group_mention(const std::vector<std::string>& group, SentenceState& st) {
    for (const auto& id : group) note_entity(st, EntityRef::object(id));
    const StoryEntity& x = entities_.at(group.front());
    EntityDescriptor d;
    d.determiner = Determiner::The;
    d.number = Number::Plural;
    d.shape = x.attrs.shape;
    d.color = x.attrs.color;
    d.size = x.attrs.size;
    return render_descriptor(d, lex_);
  }

  void render(const Message& m) {
    SentenceState st;
    Spans sp;
    TextBuilder tb;
    pending_in_.clear();
    introduced_before_ = introduced_;

    std::set<std::string> conds;
    const bool object_subject = m.kind == Kind::ObjRel || m.kind == Kind::EdgeMsg;
    if (object_subject && m.subjects.size() == 1 && !introduced_.count(m.subjects.front()))
      conds.insert("subj_new");
    if (m.kind == Kind::Has) current_block_ = m.block;

    const std::set<std::string> avoid(m.subjects.begin(), m.subjects.end());
    std::vector<Symbol> symbols = expand(start_symbol(m.kind), conds);
    std::size_t item_count = 0;
    for (const auto& item : m.items) item_count += item.size();
    const bool plural_subject = m.subjects.size() > 1 || (m.kind == Kind::Has && item_count > 1);

    for (std::size_t i = 0; i < symbols.size(); ++i) {
      const Symbol& s = symbols[i];
      if (s.kind == SymbolKind::Terminal) {
        const Span span = tb.token(s.text);
        if (s.indicator) {
          if (!sp.has_indicator) sp.indicator = span;
          sp.indicator.end = span.end;
          sp.has_indicator = true;
        }
        if (s.text == "this" && i + 1 < symbols.size() && symbols[i + 1].text == "block") {
          const Span next = tb.token("block");
          sp.this_block = Span{span.begin, next.end};
          sp.has_this_block = true;
          ++i;
        }
        continue;
      }
      const std::string& slot = s.text;
      if (slot == "$COUNT") {
        tb.words(lex_.number(static_cast<int>(m.objects.size())));
      } else if (slot == "$BLOCKS") {
        std::vector<std::string> names(m.objects.begin(), m.objects.end());
        for (const auto& n : names) note_entity(st, EntityRef::block(n));
        tb.words(join_list(names));
      } else if (slot == "$BLOCK") {
        const std::string& b = m.kind == Kind::Has ? m.block : current_block_;
        note_entity(st, EntityRef::block(b));
        sp.block = tb.words("block " + b);
      } else if (slot == "$COP") {
        tb.token(plural_subject ? "are" : "is");
      } else if (slot == "$SUBJ") {
        if (m.kind == Kind::BlockRel) {
          note_entity(st, EntityRef::block(m.subjects.front()));
          sp.subject = tb.words("block " + m.subjects.front());
        } else if (m.subjects.size() > 1) {
          sp.subject = tb.words(group_mention(m.subjects, st));
        } else {
          sp.subject = tb.words(object_mention(m.subjects.front(), true, {}, st));
        }
      } else if (slot == "$RELS") {
        for (std::size_t k = 0; k < m.relations.size(); ++k) {
          if (k > 0) tb.token(k + 1 == m.relations.size() ? "and" : ",");
          sp.relations.push_back(tb.words(lex_.relation(m.relations[k])));
        }
      } else if (slot == "$EDGE") {
        sp.relations.push_back(tb.words(lex_.relation(m.relations.front())));
      } else if (slot == "$OBJS") {
        for (std::size_t k = 0; k < m.objects.size(); ++k) {
          if (k > 0) tb.token(k + 1 == m.objects.size() ? "and" : ",");
          if (m.kind == Kind::BlockRel) {
            note_entity(st, EntityRef::block(m.objects[k]));
            sp.objects.push_back(tb.words(k == 0 ? "block " + m.objects[k] : m.objects[k]));
          } else {
            sp.objects.push_back(tb.words(object_mention(m.objects[k], false, avoid, st)));
          }
        }
      } else if (slot == "$ITEMS") {
        for (std::size_t k = 0; k < m.items.size(); ++k) {
          if (k > 0) tb.token(k + 1 == m.items.size() ? "and" : ",");
          const auto& group = m.items[k];
          for (const auto& id : group) {
            introduced_.insert(id);
            note_entity(st, EntityRef::object(id));
          }
          sp.items.push_back(tb.words(
              render_item(entities_.at(group.front()).attrs, static_cast<int>(group.size()), lex_)));
        }
      } else {
        throw UncoverableFact("slot " + slot + " has no filler in a " + std::string(start_symbol(m.kind)) +
                              " sentence");
      }
    }

    Sentence sentence;
    sentence.text = tb.finish();

    // Facts in a fixed order: introductions, then the verbalized relations.
    for (const auto& id : pending_in_) state_fact(in_fact(id), st);
    if (m.kind == Kind::Has) {
      if (!sp.has_indicator) throw UncoverableFact("containment sentence without an indicator");
      for (std::size_t k = 0; k < m.items.size(); ++k)
        for (const auto& id : m.items[k]) {
          const std::size_t fid = state_fact(in_fact(id), st);
          sentence.spans.push_back(RoleSpans{fid, sp.items[k], sp.indicator, sp.block});
        }
    } else if (m.kind == Kind::BlockRel || m.kind == Kind::ObjRel || m.kind == Kind::EdgeMsg) {
      for (const auto& s : m.subjects)
        for (std::size_t r = 0; r < m.relations.size(); ++r)
          for (std::size_t o = 0; o < m.objects.size(); ++o) {
            const bool s_block = m.kind == Kind::BlockRel;
            const bool o_block = m.kind != Kind::ObjRel;
            const Fact f{s_block ? EntityRef::block(s) : EntityRef::object(s), m.relations[r],
                         o_block ? EntityRef::block(m.objects[o]) : EntityRef::object(m.objects[o])};
            const std::size_t fid = state_fact(f, st);
            Span landmark;
            if (m.kind == Kind::EdgeMsg) {
              landmark = sp.has_this_block ? sp.this_block : sp.block;
              note_entity(st, EntityRef::block(m.objects[o]));
            } else {
              landmark = sp.objects[o];
            }
            sentence.spans.push_back(RoleSpans{fid, sp.subject, sp.relations[r], landmark});
          }
    }
    sentence.fact_ids = st.fact_ids;
    sentence.entities = st.entities;
    for (const auto& e : st.entities)
      if (std::find(story_.described_entities.begin(), story_.described_entities.end(), e) ==
          story_.described_entities.end())
        story_.described_entities.push_back(e);
    story_.sentences.push_back(std::move(sentence));

    last_subject_.clear();
    if (object_subject && m.subjects.size() == 1) last_subject_ = m.subjects.front();
  }

  const Scene& scene_;
  const std::vector<Fact>& input_;
  const Grammar& grammar_;
  const Lexicon& lex_;
  RealizerOptions opts_;
  Rng rng_;

  std::set<std::string> blocks_;
  std::map<std::string, std::string> home_;
  std::map<std::string, StoryEntity> entities_;
  std::map<std::string, std::vector<std::string>> group_of_;
  std::vector<Fact> oriented_;
  std::vector<Message> messages_;

  Story story_;
  std::map<Fact, std::size_t> fact_index_;
  std::set<std::string> introduced_;
  std::set<std::string> introduced_before_;
  std::vector<std::string> pending_in_;
  std::string last_subject_;
  std::string current_block_;
  EntailedSet closure_;
  std::size_t closure_size_ = static_cast<std::size_t>(-1);
};

}  // namespace

Story realize_story(const Scene& scene, const std::vector<Fact>& facts, const Grammar& grammar,
                    const RealizerOptions& opts, std::uint64_t seed) {
  return Realizer(scene, facts, grammar, opts, seed).run();
}

}  // namespace spatialqa
