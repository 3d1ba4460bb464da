#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spatialqa {

// ---------------------------------------------------------------------------
// Attributes
// ---------------------------------------------------------------------------

enum class Shape : std::uint8_t { Square, Circle, Triangle };
enum class Color : std::uint8_t { Yellow, Blue, Black };
enum class Size : std::uint8_t { Small, Medium, Big };

inline constexpr Shape kAllShapes[] = {Shape::Square, Shape::Circle, Shape::Triangle};
inline constexpr Color kAllColors[] = {Color::Yellow, Color::Blue, Color::Black};
inline constexpr Size kAllSizes[] = {Size::Small, Size::Medium, Size::Big};

std::string_view to_string(Shape s);
std::string_view to_string(Color c);
std::string_view to_string(Size s);
std::optional<Shape> parse_shape(std::string_view s);
std::optional<Color> parse_color(std::string_view s);
std::optional<Size> parse_size(std::string_view s);

struct Attribute {
  Shape shape = Shape::Square;
  std::optional<Color> color;
  std::optional<Size> size;

  auto operator<=>(const Attribute&) const = default;
};

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

enum class EntityKind : std::uint8_t { Block, Object };

/// Reference to a block (id = block name) or an object (id = object id).
struct EntityRef {
  EntityKind kind = EntityKind::Object;
  std::string id;

  static EntityRef block(std::string name) { return {EntityKind::Block, std::move(name)}; }
  static EntityRef object(std::string id) { return {EntityKind::Object, std::move(id)}; }

  bool is_block() const { return kind == EntityKind::Block; }
  auto operator<=>(const EntityRef&) const = default;
};

std::string to_string(const EntityRef& e);

struct Point {
  double x = 0.0;
  double y = 0.0;
  auto operator<=>(const Point&) const = default;
};

/// An object placed inside a block. Coordinates are block-local with the
/// origin at the top-left corner and y growing downwards.
struct SpatialObject {
  std::string id;
  Attribute attrs;
  std::string block_id;
  Point position;
  double radius = 0.0;

  bool operator==(const SpatialObject&) const = default;
};

struct GridCell {
  int col = 0;
  int row = 0;
  bool operator==(const GridCell&) const = default;
};

struct Block {
  std::string name;
  double width = 1.0;
  double height = 1.0;
  GridCell cell;
  std::vector<std::string> objects;

  bool operator==(const Block&) const = default;
};

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

enum class Relation : std::uint8_t {
  Left,
  Right,
  Above,
  Below,
  NearTo,
  FarFrom,
  Touching,
  In,
  TouchingEdge,
};

enum class Edge : std::uint8_t { None, Top, Bottom, Left, Right };

inline constexpr Relation kObjectRelations[] = {Relation::Left,   Relation::Right,   Relation::Above,
                                                Relation::Below,  Relation::NearTo,  Relation::FarFrom,
                                                Relation::Touching};
inline constexpr Relation kDirectional[] = {Relation::Left, Relation::Right, Relation::Above,
                                            Relation::Below};
inline constexpr Edge kAllEdges[] = {Edge::Top, Edge::Bottom, Edge::Left, Edge::Right};

struct RelationKind {
  Relation type = Relation::Left;
  Edge edge = Edge::None;  // only meaningful for TouchingEdge

  constexpr RelationKind() = default;
  constexpr RelationKind(Relation t) : type(t) {}  // NOLINT(google-explicit-constructor)
  constexpr RelationKind(Relation t, Edge e) : type(t), edge(e) {}

  auto operator<=>(const RelationKind&) const = default;
};

std::string_view to_string(Relation r);
std::string_view to_string(Edge e);
std::string to_string(const RelationKind& r);
std::optional<Relation> parse_relation(std::string_view s);
std::optional<Edge> parse_edge(std::string_view s);
std::optional<RelationKind> parse_relation_kind(std::string_view s);

/// Converse of an object-object relation. Symmetric kinds map to themselves;
/// In and TouchingEdge have none.
std::optional<Relation> converse(Relation r);
bool is_transitive(Relation r);
bool is_symmetric(Relation r);
bool is_directional(Relation r);
/// Mutual-exclusion table: {Left,Right} {Above,Below} {NearTo,FarFrom} {Touching,FarFrom}.
bool mutually_exclusive(Relation a, Relation b);
std::vector<Relation> exclusive_partners(Relation r);

enum class Polarity : std::uint8_t { Positive, Negative };

struct Fact {
  EntityRef subject;
  RelationKind relation;
  EntityRef object;
  Polarity polarity = Polarity::Positive;

  auto operator<=>(const Fact&) const = default;
};

std::string to_string(const Fact& f);

/// Invariant check for a single fact; empty string when valid.
std::string fact_violation(const Fact& f);

// ---------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------

struct Scene {
  std::vector<Block> blocks;
  std::vector<SpatialObject> objects;
  /// Directional relations between blocks, one per related pair.
  std::vector<Fact> arrangement;

  const Block* find_block(std::string_view name) const;
  const SpatialObject* find_object(std::string_view id) const;

  bool operator==(const Scene&) const = default;
};

/// Returns human-readable violations of the scene invariants; empty iff valid.
std::vector<std::string> validate_scene(const Scene& scene);

// ---------------------------------------------------------------------------
// Story
// ---------------------------------------------------------------------------

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

/// Character spans of one verbalized relation inside a sentence.
struct RoleSpans {
  std::size_t fact = 0;  // index into Story::facts
  Span trajector;
  Span indicator;
  Span landmark;

  bool operator==(const RoleSpans&) const = default;
};

struct Sentence {
  std::string text;
  std::vector<std::size_t> fact_ids;
  std::vector<RoleSpans> spans;
  std::vector<EntityRef> entities;

  bool operator==(const Sentence&) const = default;
};

/// A described object as the story presents it.
struct StoryEntity {
  EntityRef ref;
  Attribute attrs;
  std::string block;
  int ordinal = 0;  // 1..n inside a group of identical objects, 0 otherwise

  bool operator==(const StoryEntity&) const = default;
};

struct Story {
  std::vector<Fact> facts;
  std::vector<Sentence> sentences;
  std::vector<StoryEntity> objects;
  std::vector<std::string> blocks;
  std::vector<EntityRef> described_entities;
  std::size_t token_count = 0;

  std::string text() const;
  const StoryEntity* find_object(std::string_view id) const;

  bool operator==(const Story&) const = default;
};

/// Checks the story invariants (fact ids resolve, described entities match).
std::vector<std::string> validate_story(const Story& story);

// ---------------------------------------------------------------------------
// Questions
// ---------------------------------------------------------------------------

enum class QType : std::uint8_t { FR, FB, CO, YN };
inline constexpr QType kAllQTypes[] = {QType::FR, QType::FB, QType::CO, QType::YN};

std::string_view to_string(QType q);
std::optional<QType> parse_qtype(std::string_view s);

enum class Hypernym : std::uint8_t { None, Object, Shape, Thing };
enum class Determiner : std::uint8_t { The, A, All, Any, Bare };
enum class Number : std::uint8_t { Singular, Plural };

std::string_view to_string(Hypernym h);
std::string_view to_string(Determiner d);
std::optional<Hypernym> parse_hypernym(std::string_view s);
std::optional<Determiner> parse_determiner(std::string_view s);

struct EntityDescriptor;

struct NestedClause {
  RelationKind relation;
  std::vector<EntityDescriptor> inner;  // exactly one element

  bool operator==(const NestedClause&) const;
};

/// A mention of one object or a group of objects.
struct EntityDescriptor {
  std::optional<Shape> shape;
  Hypernym hypernym = Hypernym::None;  // used when shape is absent
  std::optional<Color> color;
  std::optional<Size> size;
  int ordinal = 0;
  std::optional<std::string> block;
  std::optional<NestedClause> nested;
  Number number = Number::Singular;
  Determiner determiner = Determiner::The;

  int nesting_depth() const;
  bool operator==(const EntityDescriptor&) const = default;
};

struct LogicalForm {
  /// Template family: fr, fb_has, fb_not, co_what, co_which, yn, yn_any, yn_all.
  std::string form;
  std::vector<EntityDescriptor> args;
  std::optional<RelationKind> relation;

  bool operator==(const LogicalForm&) const = default;
};

struct Justification {
  Fact fact;
  int depth = 0;
  bool operator==(const Justification&) const = default;
};

struct AnswerSet {
  std::vector<std::string> labels;
  std::vector<Justification> justification;
  bool vacuous = false;  // a universal quantifier ranged over an empty set

  bool operator==(const AnswerSet&) const = default;
};

namespace labels {
inline constexpr std::string_view kDK = "DK";
inline constexpr std::string_view kNone = "none";
inline constexpr std::string_view kYes = "Yes";
inline constexpr std::string_view kNo = "No";
inline constexpr std::string_view kObject1 = "object1";
inline constexpr std::string_view kObject2 = "object2";
inline constexpr std::string_view kBoth = "both";
}  // namespace labels

/// FR answer label for an object relation ("Left", "Near to", ...).
std::string_view fr_label(Relation r);
std::optional<Relation> relation_from_fr_label(std::string_view label);
const std::vector<std::string>& fr_candidates();
const std::vector<std::string>& co_candidates();
const std::vector<std::string>& yn_candidates();

struct Question {
  QType qtype = QType::FR;
  std::string text;
  LogicalForm logical_form;
  std::vector<std::string> candidates;
  AnswerSet gold;
  int reasoning_depth = 0;
  /// Candidates evaluators may ignore (FR near/far).
  std::vector<std::string> eval_excluded;

  bool operator==(const Question&) const = default;
};

// ---------------------------------------------------------------------------
// Annotations, variants and records
// ---------------------------------------------------------------------------

struct SceneGraphNode {
  EntityRef ref;
  std::optional<Attribute> attrs;  // objects only
  std::string block;               // objects only
  int ordinal = 0;
  bool operator==(const SceneGraphNode&) const = default;
};

struct SceneGraph {
  std::vector<SceneGraphNode> nodes;
  std::vector<Fact> edges;
  bool operator==(const SceneGraph&) const = default;
};

struct SpRLTriplet {
  std::size_t fact = 0;
  Span trajector;
  Span indicator;
  Span landmark;
  std::string trajector_text;
  std::string indicator_text;
  std::string landmark_text;
  bool operator==(const SpRLTriplet&) const = default;
};

struct SpRLAnnotation {
  std::size_t sentence = 0;
  std::vector<SpRLTriplet> triplets;
  bool operator==(const SpRLAnnotation&) const = default;
};

struct Annotations {
  SceneGraph scene_graph;
  std::vector<SpRLAnnotation> sprl;
  bool operator==(const Annotations&) const = default;
};

struct VariantItem {
  std::size_t pivot = 0;  // index into DatasetRecord::questions
  std::string edit;       // short tag naming the rewrite
  Question question;
  bool operator==(const VariantItem&) const = default;
};

struct UnseenInfo {
  std::string vocabulary;
  std::string source_id;
  bool operator==(const UnseenInfo&) const = default;
};

struct Variants {
  std::vector<VariantItem> consistency;
  std::vector<VariantItem> contrast;
  std::optional<UnseenInfo> unseen;
  bool operator==(const Variants&) const = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string generator_version;
  std::string split;
  std::size_t index = 0;
  bool operator==(const Provenance&) const = default;
};

struct DatasetRecord {
  std::string id;
  Scene scene;
  Story story;
  std::vector<Question> questions;
  Annotations annotations;
  Variants variants;
  /// Surface vocabulary the texts are written in ("seen" or a map name).
  std::string vocabulary = "seen";
  Provenance provenance;

  bool operator==(const DatasetRecord&) const = default;
};

inline constexpr std::string_view kGeneratorVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace spatialqa
