#pragma once

// Test-only oracle for the entailment closure. It enumerates explicit paths
// per relation instead of running a fixpoint, so it shares no code path with
// spatialqa::closure.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "spatialqa/model.hpp"

namespace oracle {

using spatialqa::EntityRef;
using spatialqa::Fact;
using spatialqa::Polarity;
using spatialqa::Relation;
using spatialqa::RelationKind;

inline std::set<EntityRef> universe_of(const std::vector<Fact>& stated) {
  std::set<EntityRef> u;
  for (const auto& f : stated) {
    u.insert(f.subject);
    u.insert(f.object);
  }
  return u;
}

/// Every node reachable from `from` by some explicit path of length <= max_len.
inline std::set<EntityRef> reachable_by_paths(const std::map<EntityRef, std::set<EntityRef>>& adj,
                                              const EntityRef& from, std::size_t max_len) {
  std::set<EntityRef> reached;
  std::vector<EntityRef> path{from};
  std::function<void()> walk = [&] {
    if (path.size() > max_len) return;
    auto it = adj.find(path.back());
    if (it == adj.end()) return;
    for (const auto& next : it->second) {
      if (std::find(path.begin(), path.end(), next) != path.end()) continue;
      reached.insert(next);
      path.push_back(next);
      walk();
      path.pop_back();
    }
  };
  walk();
  return reached;
}

inline Relation conv(Relation r) {
  switch (r) {
    case Relation::Left: return Relation::Right;
    case Relation::Right: return Relation::Left;
    case Relation::Above: return Relation::Below;
    case Relation::Below: return Relation::Above;
    default: return r;
  }
}

/// Entailed facts by per-relation path enumeration.
inline std::set<Fact> entailed(const std::vector<Fact>& stated, bool touching_implies_near = true) {
  const auto universe = universe_of(stated);
  const std::size_t max_len = universe.size();
  std::set<Fact> out;
  std::map<EntityRef, EntityRef> home;  // object -> block from stated In
  for (const auto& f : stated) {
    if (f.relation.type == Relation::In && f.polarity == Polarity::Positive) home[f.subject] = f.object;
    if (f.relation.type == Relation::In || f.relation.type == Relation::TouchingEdge) out.insert(f);
  }
  for (const auto& [o, b] : home)
    for (const auto& x : universe)
      if (x.is_block() && x != b)
        out.insert(Fact{o, RelationKind{Relation::In}, x, Polarity::Negative});

  for (Relation r : {Relation::Left, Relation::Right, Relation::Above, Relation::Below}) {
    std::map<EntityRef, std::set<EntityRef>> block_adj, obj_adj;
    for (const auto& f : stated) {
      const bool fwd = f.relation.type == r;
      const bool back = f.relation.type == conv(r);
      if (!fwd && !back) continue;
      const EntityRef& s = fwd ? f.subject : f.object;
      const EntityRef& t = fwd ? f.object : f.subject;
      (s.is_block() ? block_adj : obj_adj)[s].insert(t);
    }
    for (const auto& a : universe) {
      if (!a.is_block()) continue;
      for (const auto& b : reachable_by_paths(block_adj, a, max_len)) {
        out.insert(Fact{a, RelationKind{r}, b, Polarity::Positive});
        for (const auto& [o, ob] : home)
          for (const auto& [o2, ob2] : home)
            if (ob == a && ob2 == b) obj_adj[o].insert(o2);
      }
    }
    for (const auto& a : universe) {
      if (a.is_block()) continue;
      for (const auto& b : reachable_by_paths(obj_adj, a, max_len))
        out.insert(Fact{a, RelationKind{r}, b, Polarity::Positive});
    }
  }

  for (const auto& f : stated) {
    const Relation r = f.relation.type;
    if (r != Relation::NearTo && r != Relation::FarFrom && r != Relation::Touching) continue;
    out.insert(Fact{f.subject, RelationKind{r}, f.object, Polarity::Positive});
    out.insert(Fact{f.object, RelationKind{r}, f.subject, Polarity::Positive});
    if (r == Relation::Touching && touching_implies_near) {
      out.insert(Fact{f.subject, RelationKind{Relation::NearTo}, f.object, Polarity::Positive});
      out.insert(Fact{f.object, RelationKind{Relation::NearTo}, f.subject, Polarity::Positive});
    }
  }
  return out;
}

}  // namespace oracle
