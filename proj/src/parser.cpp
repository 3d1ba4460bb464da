#include "spatialqa/parser.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "spatialqa/answers.hpp"
#include "spatialqa/phrase.hpp"

namespace spatialqa {

namespace {

struct Mention {
  bool it = false;
  std::string block;  // non-empty for block references
  ParsedDescriptor np;
};

struct SlotValue {
  int count = 0;
  std::vector<std::string> names;
  std::vector<Mention> mentions;
  std::vector<RelationKind> rels;
};

struct Candidate {
  std::size_t end = 0;
  SlotValue value;
};

using Bindings = std::map<std::string, SlotValue>;

struct Match {
  Bindings slots;
  bool this_block = false;
};

class Matcher {
 public:
  Matcher(const TokenSeq& seq, std::size_t begin, std::size_t end, const Lexicon& lex, bool block_mode)
      : seq_(seq), begin_(begin), end_(end), lex_(lex), block_mode_(block_mode) {}

  std::optional<Match> match(const std::vector<Symbol>& syms) {
    Match m;
    if (!step(syms, 0, begin_, m)) return std::nullopt;
    return m;
  }
  std::size_t furthest() const { return furthest_; }

 private:
  bool step(const std::vector<Symbol>& syms, std::size_t i, std::size_t pos, Match& m) {
    furthest_ = std::max(furthest_, pos);
    if (i == syms.size()) return pos == end_;
    const Symbol& s = syms[i];
    if (s.kind == SymbolKind::Terminal) {
      if (pos >= end_ || !seq_.is(pos, s.text)) return false;
      if (s.text == "this" && i + 1 < syms.size() && syms[i + 1].text == "block") m.this_block = true;
      return step(syms, i + 1, pos + 1, m);
    }
    for (auto& c : candidates(s.text, pos)) {
      m.slots[s.text] = std::move(c.value);
      if (step(syms, i + 1, c.end, m)) return true;
    }
    m.slots.erase(s.text);
    return false;
  }

  bool name_at(std::size_t pos) const { return pos < end_ && is_block_name(seq_.tokens[pos].text); }

  std::vector<Candidate> noun_phrases(std::size_t pos, bool allow_count, int nesting) const {
    std::vector<Candidate> out;
    if (pos >= end_) return out;
    auto p = parse_descriptor(seq_, pos, lex_, allow_count, nesting);
    if (!p || p->end > end_) return out;
    Mention m;
    m.np = *p;
    out.push_back({p->end, SlotValue{0, {}, {m}, {}}});
    // The block qualifier may belong to the sentence ("... in block A .").
    if (p->desc.block && !p->desc.nested) {
      m.np.desc.block.reset();
      m.np.end -= 3;
      out.push_back({m.np.end, SlotValue{0, {}, {m}, {}}});
    }
    return out;
  }

  std::vector<Candidate> object_mentions(std::size_t pos, bool allow_count) const {
    if (pos < end_ && seq_.is(pos, "it")) {
      Mention m;
      m.it = true;
      return {Candidate{pos + 1, SlotValue{0, {}, {m}, {}}}};
    }
    return noun_phrases(pos, allow_count, 2);
  }

  std::vector<Candidate> block_mention(std::size_t pos, bool require_keyword) const {
    std::size_t p = pos;
    if (seq_.is(p, "block")) ++p;
    else if (require_keyword) return {};
    if (!name_at(p)) return {};
    Mention m;
    m.block = seq_.tokens[p].text;
    return {Candidate{p + 1, SlotValue{0, {}, {m}, {}}}};
  }

  // Lists "x", "x and y", "x , y and z"; longer lists first.
  template <typename Item>
  std::vector<Candidate> list(std::size_t pos, Item item) const {
    std::vector<std::vector<Candidate>> levels;
    SlotValue acc;
    std::size_t at = pos;
    for (bool first = true;; first = false) {
      std::size_t start = at;
      if (!first) {
        if (!(seq_.is(at, ",") || seq_.is(at, "and"))) break;
        start = at + 1;
      }
      auto cs = item(start, first);
      if (cs.empty()) break;
      std::vector<Candidate> level;
      for (const auto& c : cs) level.push_back({c.end, joined(acc, c.value)});
      acc = level.front().value;
      at = cs.front().end;
      levels.push_back(std::move(level));
    }
    std::vector<Candidate> out;
    for (auto it = levels.rbegin(); it != levels.rend(); ++it)
      for (auto& c : *it) out.push_back(std::move(c));
    return out;
  }

  static SlotValue joined(SlotValue a, const SlotValue& b) {
    a.names.insert(a.names.end(), b.names.begin(), b.names.end());
    a.mentions.insert(a.mentions.end(), b.mentions.begin(), b.mentions.end());
    a.rels.insert(a.rels.end(), b.rels.begin(), b.rels.end());
    return a;
  }

  std::vector<Candidate> relation(std::size_t pos, bool edges) const {
    std::size_t e = 0;
    if (pos >= end_) return {};
    auto r = match_relation(seq_, pos, lex_, edges, e);
    if (!r || e > end_) return {};
    return {Candidate{e, SlotValue{0, {}, {}, {*r}}}};
  }

  std::vector<Candidate> candidates(const std::string& slot, std::size_t pos) const {
    if (slot == "$COUNT") {
      auto n = pos < end_ ? match_number(seq_, pos, lex_) : std::nullopt;
      if (!n) return {};
      return {Candidate{pos + 1, SlotValue{*n, {}, {}, {}}}};
    }
    if (slot == "$BLOCKS") {
      return list(pos, [&](std::size_t p, bool) -> std::vector<Candidate> {
        if (!name_at(p)) return {};
        return {Candidate{p + 1, SlotValue{0, {seq_.tokens[p].text}, {}, {}}}};
      });
    }
    if (slot == "$BLOCK") return block_mention(pos, true);
    if (slot == "$COP") {
      if (seq_.is(pos, "is") || seq_.is(pos, "are")) return {Candidate{pos + 1, {}}};
      return {};
    }
    if (slot == "$SUBJ") return block_mode_ ? block_mention(pos, true) : object_mentions(pos, true);
    if (slot == "$OBJS") {
      if (block_mode_) return list(pos, [&](std::size_t p, bool first) { return block_mention(p, first); });
      return list(pos, [&](std::size_t p, bool) { return noun_phrases(p, true, 2); });
    }
    if (slot == "$RELS") return list(pos, [&](std::size_t p, bool) { return relation(p, false); });
    if (slot == "$REL") return relation(pos, false);
    if (slot == "$EDGE") return relation(pos, true);
    if (slot == "$ITEMS") return list(pos, [&](std::size_t p, bool) { return noun_phrases(p, true, 0); });
    if (slot == "$X" || slot == "$Y" || slot == "$ANCHOR" || slot == "$C1" || slot == "$C2")
      return noun_phrases(pos, false, 2);
    return {};
  }

  const TokenSeq& seq_;
  std::size_t begin_;
  std::size_t end_;
  const Lexicon& lex_;
  bool block_mode_;
  std::size_t furthest_ = 0;
};

constexpr std::string_view kStorySymbols[] = {"INTRO_ONE", "INTRO_MANY", "BLOCK_REL", "HAS", "EDGE", "OBJ_REL"};

struct FailedInterpretation : Error {
  using Error::Error;
};

// Story state threaded through sentences; copied per attempt so that a failed
// interpretation leaves no trace.
struct StoryState {
  ParseResult out;
  std::string current_block;
  std::string last_subject;
  std::size_t sentence_start_facts = 0;

  void add_block(const std::string& name) {
    if (std::find(out.blocks.begin(), out.blocks.end(), name) == out.blocks.end()) out.blocks.push_back(name);
  }

  void add_fact(const Fact& f) {
    if (auto v = fact_violation(f); !v.empty()) throw FailedInterpretation(v);
    out.facts.push_back(f);
  }

  std::string introduce(const EntityDescriptor& d, int ordinal) {
    if (!d.shape) throw FailedInterpretation("introduction without a shape");
    StoryEntity e;
    e.ref = EntityRef::object("p" + std::to_string(out.entities.size() + 1));
    e.attrs = Attribute{*d.shape, d.color, d.size};
    e.block = current_block;
    e.ordinal = ordinal;
    out.entities.push_back(e);
    // Stories without blocks leave containment unstated.
    if (!current_block.empty()) add_fact(Fact{e.ref, Relation::In, EntityRef::block(current_block)});
    return e.ref.id;
  }
};

class StoryParser {
 public:
  StoryParser(const Grammar& g, bool touching_implies_near) : lex_(g.lexicon()) {
    opts_.touching_implies_near = touching_implies_near;
    for (auto sym : kStorySymbols) templates_.emplace_back(std::string(sym), g.flatten(sym));
  }

  ParseResult parse(const std::string& text) {
    const TokenSeq seq(text);
    StoryState state;
    std::size_t begin = 0;
    std::size_t index = 0;
    while (begin < seq.size()) {
      std::size_t end = begin;
      while (end < seq.size() && seq.lower[end] != ".") ++end;
      if (end < seq.size()) ++end;
      ++index;
      state = sentence(seq, begin, end, index, text, std::move(state));
      begin = end;
    }
    return std::move(state.out);
  }

 private:
  StoryState sentence(const TokenSeq& seq, std::size_t begin, std::size_t end, std::size_t index,
                      const std::string& text, StoryState state) {
    std::size_t furthest = begin;
    std::string reason = "no sentence template matches";
    state.sentence_start_facts = state.out.facts.size();
    for (const auto& [symbol, alternatives] : templates_) {
      for (const auto& syms : alternatives) {
        Matcher matcher(seq, begin, end, lex_, symbol == "BLOCK_REL");
        auto m = matcher.match(syms);
        furthest = std::max(furthest, matcher.furthest());
        if (!m) continue;
        StoryState next = state;
        try {
          interpret(symbol, *m, next);
          return next;
        } catch (const FailedInterpretation& e) {
          reason = e.what();
        } catch (const InconsistentFacts& e) {
          reason = e.what();
        }
      }
    }
    const std::size_t at = std::min(furthest, end > 0 ? end - 1 : 0);
    const std::size_t from = at < seq.size() ? seq.tokens[at].begin : text.size();
    const std::size_t to = end > 0 && end <= seq.size() ? seq.tokens[end - 1].end : text.size();
    throw ParseError(index, text.substr(from, to - from), reason);
  }

  std::vector<std::string> resolve_mention(const Mention& m, StoryState& st, std::optional<EntailedSet>& closed) {
    if (m.it) {
      if (st.last_subject.empty()) throw FailedInterpretation("'it' without an antecedent");
      return {st.last_subject};
    }
    const EntityDescriptor& d = m.np.desc;
    if (m.np.count == 1) return {st.introduce(d, 0)};
    if (m.np.count > 1 || d.determiner != Determiner::The)
      throw FailedInterpretation("unexpected determiner in a story mention");
    std::vector<StoryEntity> pool;
    for (const auto& e : st.out.entities)
      if (d.block || e.block == st.current_block) pool.push_back(e);
    if (!closed) {
      const std::vector<Fact> prior(st.out.facts.begin(),
                                    st.out.facts.begin() + static_cast<std::ptrdiff_t>(st.sentence_start_facts));
      closed = closure(prior, opts_);
    }
    const auto found = resolve(d, pool, *closed);
    std::vector<std::string> ids;
    for (const StoryEntity* e : found) ids.push_back(e->ref.id);
    if (d.number == Number::Plural ? ids.size() < 2 : ids.size() != 1)
      throw FailedInterpretation(ids.empty() ? "mention resolves to nothing" : "ambiguous mention");
    return ids;
  }

  void interpret(const std::string& symbol, const Match& m, StoryState& st) {
    auto slot = [&](const char* name) -> const SlotValue& {
      static const SlotValue empty;
      auto it = m.slots.find(name);
      return it == m.slots.end() ? empty : it->second;
    };
    std::optional<EntailedSet> closed;

    if (symbol == "INTRO_ONE" || symbol == "INTRO_MANY") {
      const auto& names = slot("$BLOCKS").names;
      if (symbol == "INTRO_MANY" && slot("$COUNT").count != static_cast<int>(names.size()))
        st.out.diagnostics.push_back("block count disagrees with the listed names");
      for (const auto& n : names) st.add_block(n);
      st.last_subject.clear();
      return;
    }
    if (symbol == "BLOCK_REL") {
      const std::string& s = slot("$SUBJ").mentions.at(0).block;
      st.add_block(s);
      for (const auto& r : slot("$RELS").rels)
        for (const auto& o : slot("$OBJS").mentions) {
          st.add_block(o.block);
          st.add_fact(Fact{EntityRef::block(s), r, EntityRef::block(o.block)});
        }
      st.last_subject.clear();
      return;
    }
    if (symbol == "HAS") {
      st.current_block = slot("$BLOCK").mentions.at(0).block;
      st.add_block(st.current_block);
      for (const auto& item : slot("$ITEMS").mentions) {
        if (item.np.count < 1) throw FailedInterpretation("containment item without a count");
        for (int k = 1; k <= item.np.count; ++k) st.introduce(item.np.desc, item.np.count > 1 ? k : 0);
      }
      st.last_subject.clear();
      return;
    }

    const auto subjects = resolve_mention(slot("$SUBJ").mentions.at(0), st, closed);
    if (symbol == "EDGE") {
      std::string block = st.current_block;
      if (!m.this_block) block = slot("$BLOCK").mentions.at(0).block;
      for (const auto& s : subjects)
        for (const auto& r : slot("$EDGE").rels) st.add_fact(Fact{EntityRef::object(s), r, EntityRef::block(block)});
    } else {
      std::vector<std::string> objects;
      for (const auto& o : slot("$OBJS").mentions)
        for (auto& id : resolve_mention(o, st, closed)) objects.push_back(id);
      for (const auto& s : subjects)
        for (const auto& r : slot("$RELS").rels)
          for (const auto& o : objects) st.add_fact(Fact{EntityRef::object(s), r, EntityRef::object(o)});
    }
    st.last_subject = subjects.size() == 1 ? subjects.front() : std::string();
  }

  const Lexicon& lex_;
  ClosureOptions opts_;
  std::vector<std::pair<std::string, std::vector<std::vector<Symbol>>>> templates_;
};

constexpr std::pair<std::string_view, std::string_view> kQuestionSymbols[] = {
    {"Q_FR", "fr"}, {"Q_FB_HAS", "fb_has"}, {"Q_FB_NOT", "fb_not"}, {"Q_CO_WHICH", "co_which"},
    {"Q_CO_WHAT", "co_what"}, {"Q_YN", "yn"}, {"Q_YN_ANY", "yn_any"}, {"Q_YN_ALL", "yn_all"}};

QType qtype_of_form(std::string_view form) {
  if (form == "fr") return QType::FR;
  if (form.starts_with("fb")) return QType::FB;
  if (form.starts_with("co")) return QType::CO;
  return QType::YN;
}

}  // namespace

Story ParseResult::as_story() const {
  Story s;
  s.facts = facts;
  s.objects = entities;
  s.blocks = blocks;
  return s;
}

ParseResult parse_story(const std::string& text, const Grammar& grammar, bool touching_implies_near) {
  return StoryParser(grammar, touching_implies_near).parse(text);
}

ParsedQuestion parse_question(const std::string& text, const Grammar& grammar) {
  const TokenSeq seq(text);
  std::size_t furthest = 0;
  for (const auto& [symbol, form] : kQuestionSymbols) {
    for (const auto& syms : grammar.flatten(symbol)) {
      Matcher matcher(seq, 0, seq.size(), grammar.lexicon(), false);
      auto m = matcher.match(syms);
      furthest = std::max(furthest, matcher.furthest());
      if (!m) continue;
      ParsedQuestion q;
      q.qtype = qtype_of_form(form);
      q.logical_form.form = std::string(form);
      auto arg = [&](const char* name) { q.logical_form.args.push_back(m->slots.at(name).mentions.at(0).np.desc); };
      switch (q.qtype) {
        case QType::FR: arg("$X"); arg("$Y"); break;
        case QType::FB: arg("$X"); break;
        case QType::CO: arg("$ANCHOR"); arg("$C1"); arg("$C2"); break;
        case QType::YN: arg("$X"); arg("$Y"); break;
      }
      if (auto it = m->slots.find("$REL"); it != m->slots.end()) q.logical_form.relation = it->second.rels.at(0);
      return q;
    }
  }
  const std::size_t from = furthest < seq.size() ? seq.tokens[furthest].begin : text.size();
  throw ParseError(1, text.substr(from), "no question template matches");
}

AnswerSet solve(const std::string& story_text, const std::string& question_text, const Grammar& grammar,
                bool touching_implies_near) {
  const ParseResult parsed = parse_story(story_text, grammar, touching_implies_near);
  const ParsedQuestion q = parse_question(question_text, grammar);
  ClosureOptions opts;
  opts.touching_implies_near = touching_implies_near;
  const Story story = parsed.as_story();
  const EntailedSet closed = closure(story.facts, opts);
  return answer(q.logical_form, story, closed);
}

std::vector<Fact> align_to_story(const ParseResult& parsed, const Story& story) {
  std::map<std::string, std::string> rename;
  for (const auto& p : parsed.entities)
    for (const auto& s : story.objects)
      if (s.block == p.block && s.attrs == p.attrs && s.ordinal == p.ordinal) rename[p.ref.id] = s.ref.id;
  auto fix = [&](EntityRef r) {
    if (!r.is_block())
      if (auto it = rename.find(r.id); it != rename.end()) r.id = it->second;
    return r;
  };
  std::vector<Fact> out;
  for (const auto& f : parsed.facts) out.push_back(Fact{fix(f.subject), f.relation, fix(f.object), f.polarity});
  return out;
}

}  // namespace spatialqa
