#include "spatialqa/phrase.hpp"

#include <algorithm>

namespace spatialqa {

namespace {

bool plural_of(const EntityDescriptor& d) {
  return d.number == Number::Plural || d.determiner == Determiner::All;
}

std::string noun_of(const EntityDescriptor& d, const Lexicon& lex) {
  const Number n = plural_of(d) ? Number::Plural : Number::Singular;
  if (d.shape) return lex.shape(*d.shape, n);
  return lex.hypernym(d.hypernym == Hypernym::None ? Hypernym::Object : d.hypernym, n);
}

std::string first_word(const std::string& s) { return s.substr(0, s.find(' ')); }

}  // namespace

std::string render_descriptor(const EntityDescriptor& d, const Lexicon& lex) {
  std::string body;
  auto add = [&](const std::string& w) {
    if (!body.empty()) body += ' ';
    body += w;
  };
  if (d.size) add(lex.size(*d.size));
  if (d.color) add(lex.color(*d.color));
  add(noun_of(d, lex));
  if (d.ordinal > 0) add("number " + lex.number(d.ordinal));
  if (d.block) add("in block " + *d.block);
  if (d.nested && !d.nested->inner.empty()) {
    add(plural_of(d) ? "which are" : "which is");
    add(lex.relation(d.nested->relation));
    add(render_descriptor(d.nested->inner.front(), lex));
  }
  switch (d.determiner) {
    case Determiner::The: return "the " + body;
    case Determiner::A: return std::string(indefinite_article(first_word(body))) + " " + body;
    case Determiner::All: return "all " + body;
    case Determiner::Any: return "any " + body;
    default: return body;
  }
}

std::string render_item(const Attribute& attrs, int count, const Lexicon& lex) {
  EntityDescriptor d;
  d.shape = attrs.shape;
  d.color = attrs.color;
  d.size = attrs.size;
  if (count <= 1) {
    d.determiner = Determiner::A;
    return render_descriptor(d, lex);
  }
  d.determiner = Determiner::Bare;
  d.number = Number::Plural;
  return lex.number(count) + " " + render_descriptor(d, lex);
}

std::string join_list(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += (i + 1 == parts.size()) ? " and " : " , ";
    out += parts[i];
  }
  return out;
}

TokenSeq::TokenSeq(std::string_view text) : tokens(tokenize(text)) {
  lower.reserve(tokens.size());
  for (const auto& t : tokens) lower.push_back(to_lower(t.text));
}

const LexPhrase* match_phrase(const TokenSeq& seq, std::size_t pos, const Lexicon& lex,
                              std::string_view category) {
  for (const auto& p : lex.phrases()) {
    if (p.category != category || pos + p.tokens.size() > seq.size()) continue;
    if (std::equal(p.tokens.begin(), p.tokens.end(), seq.lower.begin() + static_cast<std::ptrdiff_t>(pos)))
      return &p;
  }
  return nullptr;
}

std::optional<RelationKind> match_relation(const TokenSeq& seq, std::size_t pos, const Lexicon& lex,
                                           bool edges, std::size_t& end) {
  if (edges) {
    const LexPhrase* p = match_phrase(seq, pos, lex, "edge");
    if (p == nullptr) return std::nullopt;
    end = pos + p->tokens.size();
    return RelationKind{Relation::TouchingEdge, *parse_edge(p->key)};
  }
  for (const auto& p : lex.phrases()) {
    if (p.category != "relation" || p.key == "in" || pos + p.tokens.size() > seq.size()) continue;
    if (std::equal(p.tokens.begin(), p.tokens.end(), seq.lower.begin() + static_cast<std::ptrdiff_t>(pos))) {
      end = pos + p.tokens.size();
      return RelationKind{*parse_relation(p.key)};
    }
  }
  return std::nullopt;
}

std::optional<int> match_number(const TokenSeq& seq, std::size_t pos, const Lexicon& lex) {
  const LexPhrase* p = match_phrase(seq, pos, lex, "number");
  if (p == nullptr || p->tokens.size() != 1) return std::nullopt;
  return std::stoi(p->key);
}

bool is_block_name(std::string_view token) {
  if (token.empty() || token.size() > 3 || token.front() < 'A' || token.front() > 'Z') return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  });
}

std::optional<ParsedDescriptor> parse_descriptor(const TokenSeq& seq, std::size_t pos, const Lexicon& lex,
                                                 bool allow_count, int max_nesting) {
  ParsedDescriptor out;
  EntityDescriptor& d = out.desc;
  if (seq.is(pos, "the")) {
    d.determiner = Determiner::The;
  } else if (seq.is(pos, "a") || seq.is(pos, "an")) {
    d.determiner = Determiner::A;
    if (allow_count) out.count = 1;
  } else if (seq.is(pos, "all")) {
    d.determiner = Determiner::All;
  } else if (seq.is(pos, "any")) {
    d.determiner = Determiner::Any;
  } else if (auto n = allow_count ? match_number(seq, pos, lex) : std::nullopt; n && *n >= 2) {
    d.determiner = Determiner::Bare;
    out.count = *n;
  } else {
    return std::nullopt;
  }
  ++pos;

  for (bool progress = true; progress;) {
    progress = false;
    if (!d.size)
      if (const LexPhrase* p = match_phrase(seq, pos, lex, "size")) {
        d.size = parse_size(p->key);
        pos += p->tokens.size();
        progress = true;
      }
    if (!d.color)
      if (const LexPhrase* p = match_phrase(seq, pos, lex, "color")) {
        d.color = parse_color(p->key);
        pos += p->tokens.size();
        progress = true;
      }
  }

  if (const LexPhrase* p = match_phrase(seq, pos, lex, "shape")) {
    d.shape = parse_shape(p->key);
    d.number = p->number;
    pos += p->tokens.size();
  } else if (const LexPhrase* h = match_phrase(seq, pos, lex, "hypernym")) {
    d.hypernym = *parse_hypernym(h->key);
    d.number = h->number;
    pos += h->tokens.size();
  } else {
    return std::nullopt;
  }
  if (out.count >= 2 && d.number != Number::Plural) return std::nullopt;
  if (out.count == 1 && d.number != Number::Singular) return std::nullopt;

  if (seq.is(pos, "number"))
    if (auto n = match_number(seq, pos + 1, lex)) {
      d.ordinal = *n;
      pos += 2;
    }
  if (seq.is(pos, "in") && seq.is(pos + 1, "block") && pos + 2 < seq.size() &&
      is_block_name(seq.tokens[pos + 2].text)) {
    d.block = seq.tokens[pos + 2].text;
    pos += 3;
  }
  if (max_nesting > 0 && seq.is(pos, "which") && (seq.is(pos + 1, "is") || seq.is(pos + 1, "are"))) {
    std::size_t rel_end = 0;
    if (auto r = match_relation(seq, pos + 2, lex, false, rel_end)) {
      if (auto inner = parse_descriptor(seq, rel_end, lex, false, max_nesting - 1)) {
        d.nested = NestedClause{*r, {inner->desc}};
        pos = inner->end;
      }
    }
  }
  out.end = pos;
  return out;
}

bool matches_attributes(const StoryEntity& e, const EntityDescriptor& d) {
  if (d.shape && e.attrs.shape != *d.shape) return false;
  if (d.color && e.attrs.color != d.color) return false;
  if (d.size && e.attrs.size != d.size) return false;
  if (d.ordinal > 0 && e.ordinal != d.ordinal) return false;
  if (d.block && e.block != *d.block) return false;
  return true;
}

std::vector<const StoryEntity*> resolve(const EntityDescriptor& d, const std::vector<StoryEntity>& pool,
                                        const EntailedSet& closure) {
  std::vector<const StoryEntity*> out;
  std::vector<const StoryEntity*> inner;
  const bool nested = d.nested && !d.nested->inner.empty();
  if (nested) inner = resolve(d.nested->inner.front(), pool, closure);
  for (const auto& e : pool) {
    if (!matches_attributes(e, d)) continue;
    if (nested) {
      std::vector<const StoryEntity*> others;
      for (const StoryEntity* y : inner)
        if (y->ref != e.ref) others.push_back(y);
      auto related = [&](const StoryEntity* y) {
        return relation_status(e.ref, y->ref, d.nested->relation, closure) == ThreeValued::True;
      };
      const bool all_inner = d.nested->inner.front().determiner == Determiner::All;
      const bool ok = all_inner ? (!others.empty() && std::all_of(others.begin(), others.end(), related))
                                : std::any_of(others.begin(), others.end(), related);
      if (!ok) continue;
    }
    out.push_back(&e);
  }
  return out;
}

}  // namespace spatialqa
