#include "spatialqa/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>

#include "spatialqa/json_io.hpp"
#include "spatialqa/rng.hpp"

namespace spatialqa {

namespace {

constexpr int kMaxBlocks = 4;
// Extra clearance keeping unintended contacts clearly outside the touch threshold.
constexpr double kClearance = 0.002;

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

double radius_for(const SamplerConfig& cfg, const Attribute& a) {
  switch (a.size.value_or(Size::Medium)) {
    case Size::Small: return cfg.radius_small;
    case Size::Big: return cfg.radius_big;
    default: return cfg.radius_medium;
  }
}

double gap_between(const SpatialObject& a, const SpatialObject& b) {
  return std::hypot(a.position.x - b.position.x, a.position.y - b.position.y) - a.radius - b.radius;
}

double edge_gap(const SpatialObject& o, const Block& b, Edge e) {
  switch (e) {
    case Edge::Top: return o.position.y - o.radius;
    case Edge::Bottom: return b.height - (o.position.y + o.radius);
    case Edge::Left: return o.position.x - o.radius;
    case Edge::Right: return b.width - (o.position.x + o.radius);
    default: return 0.0;
  }
}

Relation block_direction(const GridCell& a, const GridCell& b, Rng& rng) {
  const bool horizontal = a.col != b.col;
  const bool vertical = a.row != b.row;
  bool use_horizontal = horizontal;
  if (horizontal && vertical) use_horizontal = rng.chance(0.5);
  if (use_horizontal) return a.col < b.col ? Relation::Left : Relation::Right;
  return a.row < b.row ? Relation::Above : Relation::Below;
}

// One placement attempt for `o` (radius and attrs already set). `touch_target`
// and `edge_target` name the intended contacts, if any.
bool fits(const SpatialObject& o, const Block& block, const std::vector<SpatialObject>& placed,
          const SpatialObject* touch_target, Edge edge_target, double eps) {
  for (Edge e : kAllEdges) {
    const double g = edge_gap(o, block, e);
    if (g < -1e-9) return false;
    if (e != edge_target && g <= eps + kClearance) return false;
  }
  for (const auto& p : placed) {
    const double g = gap_between(o, p);
    if (&p == touch_target) {
      if (g < -kClearance || g > eps) return false;
    } else if (g <= eps + kClearance) {
      return false;
    }
  }
  return true;
}

void place_object(SpatialObject& o, const Block& block, const std::vector<SpatialObject>& placed,
                  const SamplerConfig& cfg, Rng& rng) {
  const double eps = cfg.touch_epsilon * block.width;
  const double r = o.radius;
  for (int attempt = 0; attempt < cfg.placement_retries; ++attempt) {
    const SpatialObject* touch_target = nullptr;
    Edge edge_target = Edge::None;
    double x = rng.uniform(r, block.width - r);
    double y = rng.uniform(r, block.height - r);
    if (!placed.empty() && rng.chance(cfg.touch_probability)) {
      touch_target = &placed[rng.below(placed.size())];
      const double angle = rng.uniform(0.0, 2.0 * 3.141592653589793);
      const double d = touch_target->radius + r;
      x = touch_target->position.x + d * std::cos(angle);
      y = touch_target->position.y + d * std::sin(angle);
    } else if (rng.chance(cfg.edge_probability)) {
      edge_target = kAllEdges[rng.below(4)];
      switch (edge_target) {
        case Edge::Top: y = r; break;
        case Edge::Bottom: y = block.height - r; break;
        case Edge::Left: x = r; break;
        case Edge::Right: x = block.width - r; break;
        default: break;
      }
    }
    o.position = Point{round3(x), round3(y)};
    if (fits(o, block, placed, touch_target, edge_target, eps)) return;
  }
  throw PlacementFailure("could not place object " + o.id + " in block " + block.name + " after " +
                         std::to_string(cfg.placement_retries) + " tries");
}

}  // namespace

std::vector<std::string> validate_config(const SamplerConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.block_count.min < 1 || cfg.block_count.min > cfg.block_count.max)
    out.push_back("block_count range is empty");
  if (cfg.block_count.max > kMaxBlocks) out.push_back("block_count exceeds the 2x2 grid");
  if (cfg.objects_per_block.min < 0 || cfg.objects_per_block.min > cfg.objects_per_block.max)
    out.push_back("objects_per_block range is empty");
  if (cfg.shapes.empty()) out.push_back("shape vocabulary is empty");
  if (cfg.colors.empty()) out.push_back("color vocabulary is empty");
  if (cfg.sizes.empty()) out.push_back("size vocabulary is empty");
  if (!(cfg.near_ratio > 0.0 && cfg.near_ratio < cfg.far_ratio))
    out.push_back("need 0 < near_ratio < far_ratio");
  if (!(cfg.describe_fraction > 0.0 && cfg.describe_fraction <= 1.0))
    out.push_back("need 0 < describe_fraction <= 1");
  if (!(cfg.touch_epsilon >= 0.0)) out.push_back("touch_epsilon must be non-negative");
  if (!(cfg.direction_margin >= 0.0)) out.push_back("direction_margin must be non-negative");
  if (!(cfg.block_width > 0.0 && cfg.block_height > 0.0)) out.push_back("block size must be positive");
  for (double r : {cfg.radius_small, cfg.radius_medium, cfg.radius_big})
    if (!(r > 0.0) || 2.0 * r >= std::min(cfg.block_width, cfg.block_height))
      out.push_back("object radius must be positive and fit inside a block");
  for (double p : {cfg.duplicate_probability, cfg.touch_probability, cfg.edge_probability})
    if (!(p >= 0.0 && p <= 1.0)) out.push_back("probabilities must lie in [0, 1]");
  if (cfg.placement_retries < 1) out.push_back("placement_retries must be positive");
  return out;
}

Scene sample_scene(const SamplerConfig& cfg) {
  if (auto v = validate_config(cfg); !v.empty()) throw Error("invalid sampler config: " + v.front());
  Rng rng(cfg.seed);
  Scene scene;
  const int n_blocks = static_cast<int>(rng.range(cfg.block_count.min, cfg.block_count.max));
  std::vector<GridCell> cells{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  rng.shuffle(cells);
  for (int i = 0; i < n_blocks; ++i) {
    Block b;
    b.name = std::string(1, static_cast<char>('A' + i));
    b.width = cfg.block_width;
    b.height = cfg.block_height;
    b.cell = cells[static_cast<std::size_t>(i)];
    scene.blocks.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < scene.blocks.size(); ++i)
    for (std::size_t j = i + 1; j < scene.blocks.size(); ++j) {
      std::size_t s = i;
      std::size_t t = j;
      if (rng.chance(0.5)) std::swap(s, t);
      const Relation r = block_direction(scene.blocks[s].cell, scene.blocks[t].cell, rng);
      scene.arrangement.push_back(Fact{EntityRef::block(scene.blocks[s].name), RelationKind{r},
                                       EntityRef::block(scene.blocks[t].name)});
    }

  for (auto& block : scene.blocks) {
    const auto count = rng.range(cfg.objects_per_block.min, cfg.objects_per_block.max);
    std::vector<SpatialObject> placed;
    for (std::int64_t k = 0; k < count; ++k) {
      SpatialObject o;
      o.id = block.name + std::to_string(k + 1);
      o.block_id = block.name;
      if (!placed.empty() && rng.chance(cfg.duplicate_probability)) {
        o.attrs = placed[rng.below(placed.size())].attrs;
      } else {
        o.attrs.shape = rng.pick(cfg.shapes);
        o.attrs.color = rng.pick(cfg.colors);
        o.attrs.size = rng.pick(cfg.sizes);
      }
      o.radius = radius_for(cfg, o.attrs) * block.width;
      place_object(o, block, placed, cfg, rng);
      placed.push_back(o);
    }
    for (auto& o : placed) {
      block.objects.push_back(o.id);
      scene.objects.push_back(std::move(o));
    }
  }
  return scene;
}

std::vector<Fact> extract_geometric_facts(const Scene& scene, const SamplerConfig& cfg) {
  std::vector<Fact> out;
  for (const auto& f : scene.arrangement) {
    out.push_back(f);
    out.push_back(Fact{f.object, RelationKind{*converse(f.relation.type)}, f.subject});
  }
  for (const auto& block : scene.blocks) {
    const EntityRef bref = EntityRef::block(block.name);
    const double eps = cfg.touch_epsilon * block.width;
    std::vector<const SpatialObject*> objs;
    for (const auto& id : block.objects)
      if (const SpatialObject* o = scene.find_object(id)) objs.push_back(o);
    for (const SpatialObject* o : objs) {
      out.push_back(Fact{EntityRef::object(o->id), RelationKind{Relation::In}, bref});
      for (Edge e : kAllEdges)
        if (edge_gap(*o, block, e) <= eps)
          out.push_back(Fact{EntityRef::object(o->id), RelationKind{Relation::TouchingEdge, e}, bref});
    }
    for (const SpatialObject* a : objs)
      for (const SpatialObject* b : objs) {
        if (a == b) continue;
        const EntityRef ra = EntityRef::object(a->id);
        const EntityRef rb = EntityRef::object(b->id);
        auto emit = [&](Relation r) { out.push_back(Fact{ra, RelationKind{r}, rb}); };
        const double mx = cfg.direction_margin * block.width;
        const double my = cfg.direction_margin * block.height;
        if (a->position.x + mx < b->position.x) emit(Relation::Left);
        if (b->position.x + mx < a->position.x) emit(Relation::Right);
        if (a->position.y + my < b->position.y) emit(Relation::Above);
        if (b->position.y + my < a->position.y) emit(Relation::Below);
        const double dist = std::hypot(a->position.x - b->position.x, a->position.y - b->position.y);
        const bool touching = dist - a->radius - b->radius <= eps;
        if (touching) emit(Relation::Touching);
        if (dist <= cfg.near_ratio * block.width) emit(Relation::NearTo);
        if (dist >= cfg.far_ratio * block.width && !touching) emit(Relation::FarFrom);
      }
  }
  return out;
}

std::vector<Fact> select_story_facts(const std::vector<Fact>& facts, const SamplerConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, 0x5e1ec7, 0));
  const double p = cfg.describe_fraction;

  std::vector<std::string> blocks;
  std::map<std::string, std::vector<std::string>> objects_of;
  for (const auto& f : facts) {
    for (const EntityRef* e : {&f.subject, &f.object})
      if (e->is_block() && std::find(blocks.begin(), blocks.end(), e->id) == blocks.end())
        blocks.push_back(e->id);
    if (f.relation.type == Relation::In && f.polarity == Polarity::Positive) {
      auto& v = objects_of[f.object.id];
      if (std::find(v.begin(), v.end(), f.subject.id) == v.end()) v.push_back(f.subject.id);
    }
  }
  std::sort(blocks.begin(), blocks.end());

  std::set<std::string> kept_blocks;
  for (const auto& b : blocks)
    if (rng.chance(p)) kept_blocks.insert(b);
  const std::size_t min_blocks = std::min<std::size_t>(2, blocks.size());
  while (kept_blocks.size() < min_blocks) {
    std::vector<std::string> missing;
    for (const auto& b : blocks)
      if (!kept_blocks.count(b)) missing.push_back(b);
    kept_blocks.insert(rng.pick(missing));
  }

  std::set<std::string> kept_objects;
  for (const auto& b : kept_blocks) {
    const auto& objs = objects_of[b];
    std::vector<std::string> chosen;
    for (const auto& o : objs)
      if (rng.chance(p)) chosen.push_back(o);
    if (chosen.empty() && !objs.empty()) chosen.push_back(rng.pick(objs));
    kept_objects.insert(chosen.begin(), chosen.end());
  }

  auto described = [&](const EntityRef& e) {
    return e.is_block() ? kept_blocks.count(e.id) > 0 : kept_objects.count(e.id) > 0;
  };

  // A decision unit is an unordered entity pair plus a relation up to converse,
  // so both orientations of one relation are kept or dropped together.
  using Unit = std::tuple<EntityRef, EntityRef, RelationKind>;
  auto unit_of = [](const Fact& f) -> Unit {
    RelationKind r = f.relation;
    if (auto c = converse(r.type); c && f.object < f.subject) return {f.object, f.subject, RelationKind{*c}};
    return {f.subject, f.object, r};
  };
  std::map<Unit, bool> decision;
  std::map<std::pair<EntityRef, EntityRef>, std::vector<Unit>> object_pair_units;
  std::vector<std::pair<std::string, std::string>> block_pairs_kept;
  std::map<std::pair<std::string, std::string>, Unit> block_pair_unit;

  for (const auto& f : facts) {
    if (!described(f.subject) || !described(f.object)) continue;
    const Unit u = unit_of(f);
    if (decision.count(u)) continue;
    const Relation r = f.relation.type;
    if (r == Relation::In) {
      decision[u] = true;
    } else if (f.subject.is_block() && f.object.is_block()) {
      decision[u] = rng.chance(p);
      const auto key = std::minmax(f.subject.id, f.object.id);
      block_pair_unit.emplace(std::pair{key.first, key.second}, u);
      if (decision[u]) block_pairs_kept.emplace_back(key.first, key.second);
    } else if (r == Relation::TouchingEdge) {
      decision[u] = rng.chance(p);
    } else {
      decision[u] = false;
      object_pair_units[{std::get<0>(u), std::get<1>(u)}].push_back(u);
    }
  }

  for (auto& [pair, units] : object_pair_units) {
    if (!rng.chance(p)) continue;
    bool any = false;
    for (const auto& u : units) {
      decision[u] = rng.chance(p);
      any = any || decision[u];
    }
    if (!any) decision[rng.pick(units)] = true;
  }

  // Keep the described blocks connected through stated block relations.
  std::map<std::string, std::string> parent;
  for (const auto& b : kept_blocks) parent[b] = b;
  std::function<std::string(const std::string&)> root = [&](const std::string& x) {
    return parent[x] == x ? x : parent[x] = root(parent[x]);
  };
  for (const auto& [a, b] : block_pairs_kept) parent[root(a)] = root(b);
  for (const auto& [key, u] : block_pair_unit) {
    if (root(key.first) == root(key.second)) continue;
    decision[u] = true;
    parent[root(key.first)] = root(key.second);
  }

  std::vector<Fact> out;
  for (const auto& f : facts) {
    if (!described(f.subject) || !described(f.object)) continue;
    auto it = decision.find(unit_of(f));
    if (it != decision.end() && it->second) out.push_back(f);
  }
  return out;
}

Scene import_scene(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("scene", std::string("invalid JSON: ") + e.what());
  }
  Scene s = decode_scene(j, "scene");
  if (auto v = validate_scene(s); !v.empty()) throw SchemaError("scene", v.front());
  return s;
}

Scene import_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scene file " + path);
  return import_scene(in);
}

void export_scene(const Scene& scene, std::ostream& out) { out << encode(scene).dump(2) << '\n'; }

Point global_position(const Scene& scene, const SpatialObject& o) {
  const Block* b = scene.find_block(o.block_id);
  if (b == nullptr) return o.position;
  return Point{b->cell.col * b->width + o.position.x, b->cell.row * b->height + o.position.y};
}

}  // namespace spatialqa
