#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "spatialqa/pipeline.hpp"
#include "spatialqa/rng.hpp"

namespace spatialqa {

namespace {

using nlohmann::json;

template <typename E>
json names(const std::vector<E>& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(std::string(to_string(e)));
  return a;
}

// Reads members of one JSON object, rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_, "expected an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& kv : j_.items())
      if (!seen_.count(kv.key())) throw SchemaError(path_ + "." + kv.key(), "unknown key");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw SchemaError(path_ + "." + key, "wrong type");
    }
  }

  void range(const char* key, IntRange& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
      throw SchemaError(path_ + "." + key, "expected [min, max]");
    out = IntRange{v[0].get<int>(), v[1].get<int>()};
  }

  template <typename E, typename Parse>
  void enums(const char* key, std::vector<E>& out, Parse parse) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array()) throw SchemaError(path_ + "." + key, "expected an array");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = path_ + "." + key + "[" + std::to_string(i) + "]";
      if (!v[i].is_string()) throw SchemaError(p, "expected a string");
      auto e = parse(v[i].get<std::string>());
      if (!e) throw SchemaError(p, "unknown value '" + v[i].get<std::string>() + "'");
      out.push_back(*e);
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

json config_to_json(const PipelineConfig& c) {
  const SamplerConfig& s = c.sampler;
  const RealizerOptions& r = c.realizer;
  const QuestionOptions& q = c.questions;
  json counts = json::object();
  for (const auto& [k, v] : c.counts) counts[k] = v;
  return json{
      {"seed", c.seed},
      {"counts", counts},
      {"questions_per_story", c.questions_per_story},
      {"qtype_mix", {{"FR", c.qtype_mix[0]}, {"FB", c.qtype_mix[1]}, {"CO", c.qtype_mix[2]}, {"YN", c.qtype_mix[3]}}},
      {"sampler",
       {{"block_count", {s.block_count.min, s.block_count.max}},
        {"objects_per_block", {s.objects_per_block.min, s.objects_per_block.max}},
        {"shapes", names(s.shapes)},
        {"colors", names(s.colors)},
        {"sizes", names(s.sizes)},
        {"touch_epsilon", s.touch_epsilon},
        {"near_ratio", s.near_ratio},
        {"far_ratio", s.far_ratio},
        {"direction_margin", s.direction_margin},
        {"block_width", s.block_width},
        {"block_height", s.block_height},
        {"radius_small", s.radius_small},
        {"radius_medium", s.radius_medium},
        {"radius_big", s.radius_big},
        {"duplicate_probability", s.duplicate_probability},
        {"touch_probability", s.touch_probability},
        {"edge_probability", s.edge_probability},
        {"describe_fraction", s.describe_fraction},
        {"placement_retries", s.placement_retries}}},
      {"realizer",
       {{"color_probability", r.color_probability},
        {"size_probability", r.size_probability},
        {"introduce_in_has_probability", r.introduce_in_has_probability},
        {"pronoun_probability", r.pronoun_probability},
        {"nested_mention_probability", r.nested_mention_probability},
        {"hypernym_probability", r.hypernym_probability},
        {"split_relations_probability", r.split_relations_probability},
        {"object_conjunction_probability", r.object_conjunction_probability},
        {"group_subject_probability", r.group_subject_probability},
        {"touching_implies_near", r.touching_implies_near}}},
      {"questions",
       {{"nested_probability", q.nested_probability},
        {"quantifier_probability", q.quantifier_probability},
        {"related_weight", q.related_weight},
        {"exclude_direct_probability", q.exclude_direct_probability},
        {"fb_absent_probability", q.fb_absent_probability}}},
      {"variants", {{"consistency", c.consistency}, {"contrast", c.contrast}, {"unseen_fraction", c.unseen_fraction}}},
      {"sentence_band", {c.sentence_band.min, c.sentence_band.max}},
      {"token_band", {c.token_band.min, c.token_band.max}},
      {"max_attempts", c.max_attempts},
      {"grammar", c.grammar_path},
      {"vocabulary", c.vocabulary_path},
      {"output", c.output_dir},
      {"threads", c.threads},
  };
}

PipelineConfig config_from_json(const json& j, const std::string& source) {
  PipelineConfig c;
  Reader top(j, source);
  top.get("seed", c.seed);
  if (const json* counts = top.child("counts")) {
    if (!counts->is_object()) throw SchemaError(source + ".counts", "expected an object");
    for (const auto& kv : counts->items()) {
      const std::string p = source + ".counts." + kv.key();
      if (std::find(std::begin(kSplits), std::end(kSplits), kv.key()) == std::end(kSplits))
        throw SchemaError(p, "unknown split");
      if (!kv.value().is_number_unsigned()) throw SchemaError(p, "expected a non-negative integer");
      c.counts[kv.key()] = kv.value().get<std::size_t>();
    }
  }
  top.get("questions_per_story", c.questions_per_story);
  if (const json* mix = top.child("qtype_mix")) {
    Reader m(*mix, source + ".qtype_mix");
    m.get("FR", c.qtype_mix[0]);
    m.get("FB", c.qtype_mix[1]);
    m.get("CO", c.qtype_mix[2]);
    m.get("YN", c.qtype_mix[3]);
  }
  if (const json* sj = top.child("sampler")) {
    SamplerConfig& s = c.sampler;
    Reader r(*sj, source + ".sampler");
    r.range("block_count", s.block_count);
    r.range("objects_per_block", s.objects_per_block);
    r.enums("shapes", s.shapes, parse_shape);
    r.enums("colors", s.colors, parse_color);
    r.enums("sizes", s.sizes, parse_size);
    r.get("touch_epsilon", s.touch_epsilon);
    r.get("near_ratio", s.near_ratio);
    r.get("far_ratio", s.far_ratio);
    r.get("direction_margin", s.direction_margin);
    r.get("block_width", s.block_width);
    r.get("block_height", s.block_height);
    r.get("radius_small", s.radius_small);
    r.get("radius_medium", s.radius_medium);
    r.get("radius_big", s.radius_big);
    r.get("duplicate_probability", s.duplicate_probability);
    r.get("touch_probability", s.touch_probability);
    r.get("edge_probability", s.edge_probability);
    r.get("describe_fraction", s.describe_fraction);
    r.get("placement_retries", s.placement_retries);
  }
  if (const json* rj = top.child("realizer")) {
    RealizerOptions& o = c.realizer;
    Reader r(*rj, source + ".realizer");
    r.get("color_probability", o.color_probability);
    r.get("size_probability", o.size_probability);
    r.get("introduce_in_has_probability", o.introduce_in_has_probability);
    r.get("pronoun_probability", o.pronoun_probability);
    r.get("nested_mention_probability", o.nested_mention_probability);
    r.get("hypernym_probability", o.hypernym_probability);
    r.get("split_relations_probability", o.split_relations_probability);
    r.get("object_conjunction_probability", o.object_conjunction_probability);
    r.get("group_subject_probability", o.group_subject_probability);
    r.get("touching_implies_near", o.touching_implies_near);
  }
  if (const json* qj = top.child("questions")) {
    QuestionOptions& o = c.questions;
    Reader r(*qj, source + ".questions");
    r.get("nested_probability", o.nested_probability);
    r.get("quantifier_probability", o.quantifier_probability);
    r.get("related_weight", o.related_weight);
    r.get("exclude_direct_probability", o.exclude_direct_probability);
    r.get("fb_absent_probability", o.fb_absent_probability);
  }
  if (const json* vj = top.child("variants")) {
    Reader r(*vj, source + ".variants");
    r.get("consistency", c.consistency);
    r.get("contrast", c.contrast);
    r.get("unseen_fraction", c.unseen_fraction);
  }
  top.range("sentence_band", c.sentence_band);
  top.range("token_band", c.token_band);
  top.get("max_attempts", c.max_attempts);
  top.get("grammar", c.grammar_path);
  top.get("vocabulary", c.vocabulary_path);
  top.get("output", c.output_dir);
  top.get("threads", c.threads);
  c.questions.touching_implies_near = c.realizer.touching_implies_near;
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path, e.what());
  }
  return config_from_json(j, path);
}

std::vector<std::string> validate_pipeline_config(const PipelineConfig& c) {
  std::vector<std::string> out = validate_config(c.sampler);
  if (c.questions_per_story < 1) out.push_back("questions_per_story must be at least 1");
  double mix = 0.0;
  for (double w : c.qtype_mix) {
    if (w < 0.0) out.push_back("qtype_mix weights must be non-negative");
    mix += w;
  }
  if (mix <= 0.0) out.push_back("qtype_mix needs a positive weight");
  if (c.unseen_fraction < 0.0 || c.unseen_fraction > 1.0) out.push_back("unseen_fraction must be in [0, 1]");
  if (c.sentence_band.min > c.sentence_band.max) out.push_back("sentence_band min exceeds max");
  if (c.token_band.min > c.token_band.max) out.push_back("token_band min exceeds max");
  if (c.max_attempts < 1) out.push_back("max_attempts must be at least 1");
  if (c.threads < 0) out.push_back("threads must be non-negative");
  for (const auto& [k, v] : c.counts)
    if (std::find(std::begin(kSplits), std::end(kSplits), k) == std::end(kSplits))
      out.push_back("unknown split '" + k + "'");
  return out;
}

std::string config_hash(const PipelineConfig& c) {
  json j = config_to_json(c);
  // Where the files go and how many threads write them does not change content.
  j.erase("output");
  j.erase("threads");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

const Grammar& config_grammar(const PipelineConfig& c) {
  if (c.grammar_path.empty()) return Grammar::standard();
  static std::mutex mu;
  static std::map<std::string, Grammar> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(c.grammar_path);
  if (it == cache.end()) it = cache.emplace(c.grammar_path, Grammar::load(c.grammar_path)).first;
  return it->second;
}

const VocabularyMap& config_vocabulary(const PipelineConfig& c) {
  if (c.vocabulary_path.empty()) return VocabularyMap::standard();
  static std::mutex mu;
  static std::map<std::string, VocabularyMap> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(c.vocabulary_path);
  if (it == cache.end()) it = cache.emplace(c.vocabulary_path, VocabularyMap::load(c.vocabulary_path)).first;
  return it->second;
}

}  // namespace spatialqa
