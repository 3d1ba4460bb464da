#include "spatialqa/algebra.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <tuple>

namespace spatialqa {

namespace {

// Literal layout: the seven object relations, In, negated In, then one
// TouchingEdge literal per edge.
constexpr std::size_t kLitIn = 7;
constexpr std::size_t kLitNotIn = 8;
constexpr std::size_t kLitEdgeBase = 9;
constexpr std::size_t kLiterals = 13;

std::size_t literal_of(const RelationKind& r, Polarity p) {
  switch (r.type) {
    case Relation::In: return p == Polarity::Negative ? kLitNotIn : kLitIn;
    case Relation::TouchingEdge:
      return kLitEdgeBase + static_cast<std::size_t>(r.edge) - 1;
    default: return static_cast<std::size_t>(r.type);
  }
}

std::pair<RelationKind, Polarity> kind_of(std::size_t lit) {
  if (lit < kLitIn) return {RelationKind{static_cast<Relation>(lit)}, Polarity::Positive};
  if (lit == kLitIn) return {RelationKind{Relation::In}, Polarity::Positive};
  if (lit == kLitNotIn) return {RelationKind{Relation::In}, Polarity::Negative};
  return {RelationKind{Relation::TouchingEdge, static_cast<Edge>(lit - kLitEdgeBase + 1)},
          Polarity::Positive};
}

struct Item {
  int depth;
  std::size_t lit, a, b;
  bool operator>(const Item& o) const {
    return std::tie(depth, lit, a, b) > std::tie(o.depth, o.lit, o.a, o.b);
  }
};

}  // namespace

std::string_view to_string(ThreeValued v) {
  switch (v) {
    case ThreeValued::True: return "true";
    case ThreeValued::False: return "false";
    default: return "unknown";
  }
}

std::optional<std::size_t> EntailedSet::index_of(const EntityRef& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> EntailedSet::depth(const Fact& f) const {
  auto a = index_of(f.subject);
  auto b = index_of(f.object);
  if (!a || !b) return std::nullopt;
  if (f.relation.type == Relation::TouchingEdge && f.relation.edge == Edge::None)
    return std::nullopt;
  int d = at(literal_of(f.relation, f.polarity), *a, *b);
  if (d < 0) return std::nullopt;
  return d;
}

std::set<RelationKind> EntailedSet::relations(const EntityRef& a, const EntityRef& b) const {
  std::set<RelationKind> out;
  auto ia = index_of(a);
  auto ib = index_of(b);
  if (!ia || !ib) return out;
  for (std::size_t lit = 0; lit < kLiterals; ++lit) {
    if (lit == kLitNotIn) continue;
    if (at(lit, *ia, *ib) >= 0) out.insert(kind_of(lit).first);
  }
  return out;
}

bool EntailedSet::excluded_from(const EntityRef& object, const EntityRef& block) const {
  return contains(Fact{object, RelationKind{Relation::In}, block, Polarity::Negative});
}

std::vector<Fact> EntailedSet::facts() const {
  std::vector<Fact> out;
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      for (std::size_t lit = 0; lit < kLiterals; ++lit)
        if (at(lit, a, b) >= 0) {
          auto [kind, pol] = kind_of(lit);
          out.push_back(Fact{entities_[a], kind, entities_[b], pol});
        }
  return out;
}

std::size_t EntailedSet::size() const {
  std::size_t k = 0;
  for (int d : depth_)
    if (d >= 0) ++k;
  return k;
}

EntailedSet closure(std::span<const Fact> stated, const ClosureOptions& opts) {
  EntailedSet e;
  auto add_entity = [&](const EntityRef& r) {
    if (e.index_.emplace(r, 0).second) e.entities_.push_back(r);
  };
  for (const auto& f : stated) {
    if (auto v = fact_violation(f); !v.empty()) throw Error("invalid stated fact: " + v);
    add_entity(f.subject);
    add_entity(f.object);
  }
  for (const auto& r : opts.extra_entities) add_entity(r);
  std::sort(e.entities_.begin(), e.entities_.end());
  for (std::size_t i = 0; i < e.entities_.size(); ++i) e.index_[e.entities_[i]] = i;

  const std::size_t n = e.entities_.size();
  e.n_ = n;
  e.depth_.assign(kLiterals * n * n, -1);
  std::vector<char> done(kLiterals * n * n, 0);
  auto slot = [n](std::size_t lit, std::size_t a, std::size_t b) { return (lit * n + a) * n + b; };

  std::vector<std::size_t> blocks;
  std::vector<std::size_t> objects;
  for (std::size_t i = 0; i < n; ++i)
    (e.entities_[i].is_block() ? blocks : objects).push_back(i);

  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::string self_loop;
  auto relax = [&](std::size_t lit, std::size_t a, std::size_t b, int d) {
    if (a == b) {
      if (self_loop.empty())
        self_loop = std::string(to_string(kind_of(lit).first)) + " cycle through " +
                    to_string(e.entities_[a]);
      return;
    }
    int& cur = e.depth_[slot(lit, a, b)];
    if (cur < 0 || d < cur) {
      cur = d;
      queue.push(Item{d, lit, a, b});
    }
  };

  for (const auto& f : stated)
    relax(literal_of(f.relation, f.polarity), e.index_.at(f.subject), e.index_.at(f.object), 0);

  auto fin = [&](std::size_t lit, std::size_t a, std::size_t b) -> int {
    const std::size_t s = slot(lit, a, b);
    return done[s] ? e.depth_[s] : -1;
  };

  while (!queue.empty()) {
    const Item it = queue.top();
    queue.pop();
    const std::size_t s = slot(it.lit, it.a, it.b);
    if (done[s] || e.depth_[s] != it.depth) continue;
    done[s] = 1;
    const int d = it.depth;
    const std::size_t a = it.a;
    const std::size_t b = it.b;

    if (it.lit < kLitIn) {
      const auto r = static_cast<Relation>(it.lit);
      const auto conv = static_cast<std::size_t>(*converse(r));
      relax(conv, b, a, d + 1);
      if (is_transitive(r)) {
        for (std::size_t c = 0; c < n; ++c) {
          if (int d2 = fin(it.lit, b, c); d2 >= 0) relax(it.lit, a, c, d + d2 + 1);
          if (int d2 = fin(it.lit, c, a); d2 >= 0) relax(it.lit, c, b, d + d2 + 1);
        }
        if (e.entities_[a].is_block() && e.entities_[b].is_block()) {
          for (std::size_t o : objects) {
            int d1 = fin(kLitIn, o, a);
            if (d1 < 0) continue;
            for (std::size_t o2 : objects) {
              int d2 = fin(kLitIn, o2, b);
              if (d2 >= 0) relax(it.lit, o, o2, d + d1 + d2 + 1);
            }
          }
        }
      } else if (r == Relation::Touching && opts.touching_implies_near) {
        relax(static_cast<std::size_t>(Relation::NearTo), a, b, d + 1);
      }
    } else if (it.lit == kLitIn) {
      for (std::size_t x : blocks)
        if (x != b) relax(kLitNotIn, a, x, d + 1);
      for (Relation r : kDirectional) {
        const auto lit = static_cast<std::size_t>(r);
        for (std::size_t other : blocks) {
          if (int dr = fin(lit, b, other); dr >= 0) {
            for (std::size_t o2 : objects)
              if (int d2 = fin(kLitIn, o2, other); d2 >= 0) relax(lit, a, o2, d + dr + d2 + 1);
          }
          if (int dr = fin(lit, other, b); dr >= 0) {
            for (std::size_t o2 : objects)
              if (int d2 = fin(kLitIn, o2, other); d2 >= 0) relax(lit, o2, a, d + dr + d2 + 1);
          }
        }
      }
    }
  }

  if (!self_loop.empty()) throw InconsistentFacts(self_loop);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (e.at(kLitIn, a, b) >= 0 && e.at(kLitNotIn, a, b) >= 0)
        throw InconsistentFacts(to_string(e.entities_[a]) + " both in and not in " +
                                to_string(e.entities_[b]));
      for (std::size_t x = 0; x < kLitIn; ++x)
        for (std::size_t y = x + 1; y < kLitIn; ++y)
          if (e.at(x, a, b) >= 0 && e.at(y, a, b) >= 0 &&
              mutually_exclusive(static_cast<Relation>(x), static_cast<Relation>(y)))
            throw InconsistentFacts(std::string(to_string(static_cast<Relation>(x))) + " and " +
                                    std::string(to_string(static_cast<Relation>(y))) +
                                    " both hold from " + to_string(e.entities_[a]) + " to " +
                                    to_string(e.entities_[b]));
    }
  }
  return e;
}

ThreeValued relation_status(const EntityRef& a, const EntityRef& b, const RelationKind& r,
                            const EntailedSet& e) {
  if (e.contains(Fact{a, r, b, Polarity::Positive})) return ThreeValued::True;
  if (r.type == Relation::In) {
    return e.excluded_from(a, b) ? ThreeValued::False : ThreeValued::Unknown;
  }
  for (Relation x : exclusive_partners(r.type))
    if (e.contains(Fact{a, RelationKind{x}, b, Polarity::Positive})) return ThreeValued::False;
  return ThreeValued::Unknown;
}

std::set<RelationKind> all_relations(const EntityRef& a, const EntityRef& b,
                                     const EntailedSet& e) {
  return e.relations(a, b);
}

}  // namespace spatialqa
