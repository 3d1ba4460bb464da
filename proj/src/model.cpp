#include "spatialqa/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <utility>

namespace spatialqa {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view s) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::array<std::pair<Shape, std::string_view>, 3> kShapeNames{
    {{Shape::Square, "square"}, {Shape::Circle, "circle"}, {Shape::Triangle, "triangle"}}};
constexpr std::array<std::pair<Color, std::string_view>, 3> kColorNames{
    {{Color::Yellow, "yellow"}, {Color::Blue, "blue"}, {Color::Black, "black"}}};
constexpr std::array<std::pair<Size, std::string_view>, 3> kSizeNames{
    {{Size::Small, "small"}, {Size::Medium, "medium"}, {Size::Big, "big"}}};
constexpr std::array<std::pair<Relation, std::string_view>, 9> kRelationNames{
    {{Relation::Left, "left"},
     {Relation::Right, "right"},
     {Relation::Above, "above"},
     {Relation::Below, "below"},
     {Relation::NearTo, "near"},
     {Relation::FarFrom, "far"},
     {Relation::Touching, "touching"},
     {Relation::In, "in"},
     {Relation::TouchingEdge, "touching_edge"}}};
constexpr std::array<std::pair<Edge, std::string_view>, 5> kEdgeNames{{{Edge::None, "none"},
                                                                       {Edge::Top, "top"},
                                                                       {Edge::Bottom, "bottom"},
                                                                       {Edge::Left, "left"},
                                                                       {Edge::Right, "right"}}};
constexpr std::array<std::pair<QType, std::string_view>, 4> kQTypeNames{
    {{QType::FR, "FR"}, {QType::FB, "FB"}, {QType::CO, "CO"}, {QType::YN, "YN"}}};
constexpr std::array<std::pair<Hypernym, std::string_view>, 4> kHypernymNames{
    {{Hypernym::None, "none"},
     {Hypernym::Object, "object"},
     {Hypernym::Shape, "shape"},
     {Hypernym::Thing, "thing"}}};
constexpr std::array<std::pair<Determiner, std::string_view>, 5> kDeterminerNames{
    {{Determiner::The, "the"},
     {Determiner::A, "a"},
     {Determiner::All, "all"},
     {Determiner::Any, "any"},
     {Determiner::Bare, "bare"}}};
constexpr std::array<std::pair<Relation, std::string_view>, 7> kFrLabels{
    {{Relation::Left, "Left"},
     {Relation::Right, "Right"},
     {Relation::Below, "Below"},
     {Relation::Above, "Above"},
     {Relation::Touching, "Touching"},
     {Relation::FarFrom, "Far from"},
     {Relation::NearTo, "Near to"}}};

}  // namespace

std::string_view to_string(Shape s) { return name_of(kShapeNames, s); }
std::string_view to_string(Color c) { return name_of(kColorNames, c); }
std::string_view to_string(Size s) { return name_of(kSizeNames, s); }
std::optional<Shape> parse_shape(std::string_view s) { return lookup(kShapeNames, s); }
std::optional<Color> parse_color(std::string_view s) { return lookup(kColorNames, s); }
std::optional<Size> parse_size(std::string_view s) { return lookup(kSizeNames, s); }

std::string to_string(const EntityRef& e) {
  return (e.is_block() ? "block:" : "") + e.id;
}

std::string_view to_string(Relation r) { return name_of(kRelationNames, r); }
std::string_view to_string(Edge e) { return name_of(kEdgeNames, e); }

std::string to_string(const RelationKind& r) {
  std::string out(to_string(r.type));
  if (r.type == Relation::TouchingEdge) {
    out += ':';
    out += to_string(r.edge);
  }
  return out;
}

std::optional<Relation> parse_relation(std::string_view s) { return lookup(kRelationNames, s); }
std::optional<Edge> parse_edge(std::string_view s) { return lookup(kEdgeNames, s); }

std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    auto r = parse_relation(s);
    if (!r || *r == Relation::TouchingEdge) return std::nullopt;
    return RelationKind{*r};
  }
  auto r = parse_relation(s.substr(0, colon));
  auto e = parse_edge(s.substr(colon + 1));
  if (!r || !e || *r != Relation::TouchingEdge || *e == Edge::None) return std::nullopt;
  return RelationKind{*r, *e};
}

std::optional<Relation> converse(Relation r) {
  switch (r) {
    case Relation::Left: return Relation::Right;
    case Relation::Right: return Relation::Left;
    case Relation::Above: return Relation::Below;
    case Relation::Below: return Relation::Above;
    case Relation::NearTo:
    case Relation::FarFrom:
    case Relation::Touching: return r;
    case Relation::In:
    case Relation::TouchingEdge: return std::nullopt;
  }
  return std::nullopt;
}

bool is_transitive(Relation r) { return is_directional(r); }

bool is_symmetric(Relation r) {
  return r == Relation::NearTo || r == Relation::FarFrom || r == Relation::Touching;
}

bool is_directional(Relation r) {
  return r == Relation::Left || r == Relation::Right || r == Relation::Above ||
         r == Relation::Below;
}

bool mutually_exclusive(Relation a, Relation b) {
  auto pair_is = [&](Relation x, Relation y) {
    return (a == x && b == y) || (a == y && b == x);
  };
  return pair_is(Relation::Left, Relation::Right) || pair_is(Relation::Above, Relation::Below) ||
         pair_is(Relation::NearTo, Relation::FarFrom) ||
         pair_is(Relation::Touching, Relation::FarFrom);
}

std::vector<Relation> exclusive_partners(Relation r) {
  std::vector<Relation> out;
  for (Relation s : kObjectRelations) {
    if (mutually_exclusive(r, s)) out.push_back(s);
  }
  return out;
}

std::string to_string(const Fact& f) {
  std::string out = f.polarity == Polarity::Negative ? "not " : "";
  out += to_string(f.relation) + "(" + to_string(f.subject) + ", " + to_string(f.object) + ")";
  return out;
}

std::string fact_violation(const Fact& f) {
  if (f.subject == f.object) return "subject equals object in " + to_string(f);
  if (f.polarity == Polarity::Negative && f.relation.type != Relation::In)
    return "negative polarity on a non-In relation in " + to_string(f);
  if ((f.relation.type == Relation::TouchingEdge) != (f.relation.edge != Edge::None))
    return "edge set inconsistently in " + to_string(f);
  switch (f.relation.type) {
    case Relation::In:
    case Relation::TouchingEdge:
      if (f.subject.is_block() || !f.object.is_block())
        return "containment must relate an object to a block in " + to_string(f);
      break;
    case Relation::NearTo:
    case Relation::FarFrom:
    case Relation::Touching:
      if (f.subject.is_block() || f.object.is_block())
        return "distance relations hold between objects only in " + to_string(f);
      break;
    default:
      if (f.subject.kind != f.object.kind)
        return "directional relation mixes a block and an object in " + to_string(f);
  }
  return {};
}

const Block* Scene::find_block(std::string_view name) const {
  for (const auto& b : blocks)
    if (b.name == name) return &b;
  return nullptr;
}

const SpatialObject* Scene::find_object(std::string_view id) const {
  for (const auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

std::vector<std::string> validate_scene(const Scene& scene) {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& b : scene.blocks) {
    if (!names.insert(b.name).second) out.push_back("duplicate block name " + b.name);
    if (!(b.width > 0.0) || !(b.height > 0.0)) out.push_back("block " + b.name + " has empty bounds");
  }
  std::set<std::string> ids;
  for (const auto& o : scene.objects) {
    if (!ids.insert(o.id).second) out.push_back("duplicate object id " + o.id);
    const Block* b = scene.find_block(o.block_id);
    if (b == nullptr) {
      out.push_back("object " + o.id + " references unknown block " + o.block_id);
      continue;
    }
    if (!(o.radius > 0.0)) {
      out.push_back("object " + o.id + " has non-positive radius");
      continue;
    }
    constexpr double kSlack = 1e-9;
    if (o.position.x - o.radius < -kSlack || o.position.y - o.radius < -kSlack ||
        o.position.x + o.radius > b->width + kSlack || o.position.y + o.radius > b->height + kSlack)
      out.push_back("object " + o.id + " extends outside block " + b->name);
    const auto n = std::count(b->objects.begin(), b->objects.end(), o.id);
    if (n != 1) out.push_back("object " + o.id + " is not listed exactly once by block " + b->name);
  }
  for (const auto& b : scene.blocks) {
    for (const auto& id : b.objects) {
      const SpatialObject* o = scene.find_object(id);
      if (o == nullptr)
        out.push_back("block " + b.name + " lists unknown object " + id);
      else if (o->block_id != b.name)
        out.push_back("object " + id + " listed by block " + b.name + " but placed in " + o->block_id);
    }
  }
  std::set<std::pair<std::string, std::string>> related;
  for (const auto& f : scene.arrangement) {
    if (!f.subject.is_block() || !f.object.is_block() || !is_directional(f.relation.type) ||
        f.polarity != Polarity::Positive) {
      out.push_back("arrangement fact is not a directional block relation: " + to_string(f));
      continue;
    }
    const Block* a = scene.find_block(f.subject.id);
    const Block* b = scene.find_block(f.object.id);
    if (a == nullptr || b == nullptr || a == b) {
      out.push_back("arrangement fact references invalid blocks: " + to_string(f));
      continue;
    }
    auto key = std::minmax(a->name, b->name);
    if (!related.insert({key.first, key.second}).second)
      out.push_back("more than one directional relation between blocks " + a->name + " and " +
                    b->name);
    bool geometric = false;
    switch (f.relation.type) {
      case Relation::Left: geometric = a->cell.col < b->cell.col; break;
      case Relation::Right: geometric = a->cell.col > b->cell.col; break;
      case Relation::Above: geometric = a->cell.row < b->cell.row; break;
      case Relation::Below: geometric = a->cell.row > b->cell.row; break;
      default: break;
    }
    if (!geometric) out.push_back("arrangement fact contradicts grid placement: " + to_string(f));
  }
  return out;
}

std::string Story::text() const {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s.text;
  }
  return out;
}

const StoryEntity* Story::find_object(std::string_view id) const {
  for (const auto& e : objects)
    if (e.ref.id == id) return &e;
  return nullptr;
}

std::vector<std::string> validate_story(const Story& story) {
  std::vector<std::string> out;
  std::set<EntityRef> mentioned;
  for (std::size_t i = 0; i < story.sentences.size(); ++i) {
    const auto& s = story.sentences[i];
    for (auto id : s.fact_ids)
      if (id >= story.facts.size())
        out.push_back("sentence " + std::to_string(i) + " references missing fact " +
                      std::to_string(id));
    for (const auto& rs : s.spans) {
      if (rs.fact >= story.facts.size())
        out.push_back("sentence " + std::to_string(i) + " has spans for a missing fact");
      for (const Span& sp : {rs.trajector, rs.indicator, rs.landmark})
        if (sp.begin > sp.end || sp.end > s.text.size())
          out.push_back("sentence " + std::to_string(i) + " has an out-of-bounds span");
    }
    mentioned.insert(s.entities.begin(), s.entities.end());
  }
  std::set<EntityRef> described(story.described_entities.begin(), story.described_entities.end());
  if (described != mentioned) out.push_back("described entities differ from mentioned entities");
  return out;
}

std::string_view to_string(QType q) { return name_of(kQTypeNames, q); }
std::optional<QType> parse_qtype(std::string_view s) { return lookup(kQTypeNames, s); }
std::string_view to_string(Hypernym h) { return name_of(kHypernymNames, h); }
std::string_view to_string(Determiner d) { return name_of(kDeterminerNames, d); }
std::optional<Hypernym> parse_hypernym(std::string_view s) { return lookup(kHypernymNames, s); }
std::optional<Determiner> parse_determiner(std::string_view s) {
  return lookup(kDeterminerNames, s);
}

bool NestedClause::operator==(const NestedClause& o) const {
  return relation == o.relation && inner == o.inner;
}

int EntityDescriptor::nesting_depth() const {
  if (!nested || nested->inner.empty()) return 0;
  return 1 + nested->inner.front().nesting_depth();
}

std::string_view fr_label(Relation r) { return name_of(kFrLabels, r); }

std::optional<Relation> relation_from_fr_label(std::string_view label) {
  return lookup(kFrLabels, label);
}

const std::vector<std::string>& fr_candidates() {
  static const std::vector<std::string> c = [] {
    std::vector<std::string> v;
    for (const auto& [r, name] : kFrLabels) v.emplace_back(name);
    return v;
  }();
  return c;
}

const std::vector<std::string>& co_candidates() {
  static const std::vector<std::string> c{std::string(labels::kObject1),
                                          std::string(labels::kObject2),
                                          std::string(labels::kBoth), std::string(labels::kNone)};
  return c;
}

const std::vector<std::string>& yn_candidates() {
  static const std::vector<std::string> c{std::string(labels::kYes), std::string(labels::kNo),
                                          std::string(labels::kDK)};
  return c;
}

}  // namespace spatialqa
