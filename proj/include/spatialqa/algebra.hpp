#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "spatialqa/model.hpp"

namespace spatialqa {

// ---------------------------------------------------------------------------
// Kleene strong three-valued logic
// ---------------------------------------------------------------------------

enum class ThreeValued : std::uint8_t { False, True, Unknown };

constexpr ThreeValued logical_not(ThreeValued v) {
  switch (v) {
    case ThreeValued::False: return ThreeValued::True;
    case ThreeValued::True: return ThreeValued::False;
    default: return ThreeValued::Unknown;
  }
}

constexpr ThreeValued logical_and(ThreeValued a, ThreeValued b) {
  if (a == ThreeValued::False || b == ThreeValued::False) return ThreeValued::False;
  if (a == ThreeValued::True && b == ThreeValued::True) return ThreeValued::True;
  return ThreeValued::Unknown;
}

constexpr ThreeValued logical_or(ThreeValued a, ThreeValued b) {
  if (a == ThreeValued::True || b == ThreeValued::True) return ThreeValued::True;
  if (a == ThreeValued::False && b == ThreeValued::False) return ThreeValued::False;
  return ThreeValued::Unknown;
}

std::string_view to_string(ThreeValued v);

// ---------------------------------------------------------------------------
// Closure
// ---------------------------------------------------------------------------

struct ClosureOptions {
  /// Touching(a,b) also entails NearTo(a,b).
  bool touching_implies_near = true;
  /// Entities added to the universe even when no stated fact mentions them.
  std::vector<EntityRef> extra_entities;
};

class InconsistentFacts : public Error {
 public:
  explicit InconsistentFacts(const std::string& what) : Error("inconsistent facts: " + what) {}
};

/// Entailment closure of a set of stated facts. Immutable once built.
class EntailedSet {
 public:
  EntailedSet() = default;

  const std::vector<EntityRef>& entities() const { return entities_; }
  std::optional<std::size_t> index_of(const EntityRef& e) const;

  bool contains(const Fact& f) const { return depth(f).has_value(); }
  /// Minimal number of rule applications deriving f; 0 for stated facts.
  std::optional<int> depth(const Fact& f) const;

  /// Positive relations entailed from a to b.
  std::set<RelationKind> relations(const EntityRef& a, const EntityRef& b) const;
  bool excluded_from(const EntityRef& object, const EntityRef& block) const;

  /// Every entailed fact in a stable order.
  std::vector<Fact> facts() const;
  std::size_t size() const;

  bool operator==(const EntailedSet& o) const { return facts() == o.facts(); }

 private:
  friend EntailedSet closure(std::span<const Fact> stated, const ClosureOptions& opts);

  int at(std::size_t lit, std::size_t a, std::size_t b) const {
    return depth_[(lit * n_ + a) * n_ + b];
  }

  std::vector<EntityRef> entities_;
  std::map<EntityRef, std::size_t> index_;
  std::size_t n_ = 0;
  std::vector<int> depth_;  // -1 = absent
};

/// Least fixpoint of the stated facts under transitivity (directional kinds),
/// converse/symmetry, inclusion lifting of block relations onto their objects,
/// and exclusion of every other block for a contained object. Throws
/// InconsistentFacts when the fixpoint holds two mutually exclusive relations.
EntailedSet closure(std::span<const Fact> stated, const ClosureOptions& opts = {});

/// True iff r is entailed, False iff an exclusive relation is, Unknown otherwise.
ThreeValued relation_status(const EntityRef& a, const EntityRef& b, const RelationKind& r,
                            const EntailedSet& e);

std::set<RelationKind> all_relations(const EntityRef& a, const EntityRef& b, const EntailedSet& e);

}  // namespace spatialqa
