#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spatialqa/model.hpp"

namespace spatialqa {

struct IntRange {
  int min = 0;
  int max = 0;
  bool operator==(const IntRange&) const = default;
};

struct SamplerConfig {
  IntRange block_count{2, 3};
  IntRange objects_per_block{1, 4};
  std::vector<Shape> shapes{Shape::Square, Shape::Circle, Shape::Triangle};
  std::vector<Color> colors{Color::Yellow, Color::Blue, Color::Black};
  std::vector<Size> sizes{Size::Small, Size::Medium, Size::Big};

  // Geometry thresholds, as fractions of block width.
  double touch_epsilon = 0.01;
  double near_ratio = 0.3;
  double far_ratio = 0.6;
  double direction_margin = 0.05;

  double block_width = 1.0;
  double block_height = 1.0;
  /// Object radius per size, as a fraction of block width.
  double radius_small = 0.06;
  double radius_medium = 0.09;
  double radius_big = 0.12;

  /// Chance that a new object copies the attributes of one already in its block.
  double duplicate_probability = 0.2;
  double touch_probability = 0.2;
  double edge_probability = 0.2;

  double describe_fraction = 0.7;
  int placement_retries = 1000;
  std::uint64_t seed = 0;

  bool operator==(const SamplerConfig&) const = default;
};

/// Empty iff the config invariants hold.
std::vector<std::string> validate_config(const SamplerConfig& cfg);

class PlacementFailure : public Error {
 public:
  using Error::Error;
};

/// Seeded random scene: blocks on a grid of at most 2x2 cells, each pair of
/// blocks related by one direction, objects placed by rejection sampling.
Scene sample_scene(const SamplerConfig& cfg);

/// Facts that hold in the scene geometry (object pairs in both orientations).
std::vector<Fact> extract_geometric_facts(const Scene& scene, const SamplerConfig& cfg);

/// Random subset of blocks, objects and relations to describe. Every selected
/// object keeps its In fact so it stays linked to a described block.
std::vector<Fact> select_story_facts(const std::vector<Fact>& facts, const SamplerConfig& cfg);

/// Scene file I/O (schema in schemas/scene.schema.json). Throws SchemaError.
Scene import_scene(std::istream& in);
Scene import_scene_file(const std::string& path);
void export_scene(const Scene& scene, std::ostream& out);

/// Block-local centre mapped into scene coordinates (blocks tiled by grid cell).
Point global_position(const Scene& scene, const SpatialObject& o);

}  // namespace spatialqa
