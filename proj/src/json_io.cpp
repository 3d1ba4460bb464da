#include "spatialqa/json_io.hpp"

#include <utility>

namespace spatialqa {

namespace {

std::string child(const std::string& path, std::string_view key) {
  return path + "." + std::string(key);
}

std::string child(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& field(const Json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(std::string(key));
  if (it == j.end()) throw SchemaError(child(path, key), "missing field");
  return *it;
}

const Json* optional_field(const Json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(std::string(key));
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

std::int64_t as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::size_t as_index(const Json& j, const std::string& path) {
  auto v = as_int(j, path);
  if (v < 0) throw SchemaError(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

template <typename T, typename F>
std::vector<T> decode_list(const Json& j, const std::string& path, F&& f) {
  std::vector<T> out;
  const Json& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(f(arr[i], child(path, i)));
  return out;
}

template <typename T>
T parsed(std::optional<T> v, const std::string& path, const std::string& raw) {
  if (!v) throw SchemaError(path, "unknown value '" + raw + "'");
  return *v;
}

Json encode_span(const Span& s) { return Json::array({s.begin, s.end}); }

Span decode_span(const Json& j, const std::string& path) {
  const Json& arr = as_array(j, path);
  if (arr.size() != 2) throw SchemaError(path, "expected [begin, end]");
  Span s{as_index(arr[0], child(path, 0)), as_index(arr[1], child(path, 1))};
  if (s.begin > s.end) throw SchemaError(path, "begin after end");
  return s;
}

void put_attrs(Json& j, const Attribute& a) {
  j["shape"] = to_string(a.shape);
  if (a.color) j["color"] = to_string(*a.color);
  if (a.size) j["size"] = to_string(*a.size);
}

Json encode_variant(const VariantItem& v) {
  return Json{{"pivot", v.pivot}, {"edit", v.edit}, {"question", encode(v.question)}};
}

VariantItem decode_variant(const Json& j, const std::string& path) {
  VariantItem v;
  v.pivot = as_index(field(j, "pivot", path), child(path, "pivot"));
  v.edit = as_string(field(j, "edit", path), child(path, "edit"));
  v.question = decode_question(field(j, "question", path), child(path, "question"));
  return v;
}

}  // namespace

Json encode(const EntityRef& e) {
  return (e.is_block() ? "block:" : "object:") + e.id;
}

EntityRef decode_entity(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s.rfind("block:", 0) == 0 && s.size() > 6) return EntityRef::block(s.substr(6));
  if (s.rfind("object:", 0) == 0 && s.size() > 7) return EntityRef::object(s.substr(7));
  throw SchemaError(path, "entity must be 'block:<name>' or 'object:<id>'");
}

Json encode(const Attribute& a) {
  Json j = Json::object();
  put_attrs(j, a);
  return j;
}

Attribute decode_attribute(const Json& j, const std::string& path) {
  Attribute a;
  const auto shape_path = child(path, "shape");
  const auto shape = as_string(field(j, "shape", path), shape_path);
  a.shape = parsed(parse_shape(shape), shape_path, shape);
  if (const Json* c = optional_field(j, "color", path)) {
    auto s = as_string(*c, child(path, "color"));
    a.color = parsed(parse_color(s), child(path, "color"), s);
  }
  if (const Json* z = optional_field(j, "size", path)) {
    auto s = as_string(*z, child(path, "size"));
    a.size = parsed(parse_size(s), child(path, "size"), s);
  }
  return a;
}

Json encode(const Fact& f) {
  return Json{{"subject", encode(f.subject)},
              {"relation", to_string(f.relation)},
              {"object", encode(f.object)},
              {"polarity", f.polarity == Polarity::Positive ? "positive" : "negative"}};
}

Fact decode_fact(const Json& j, const std::string& path) {
  Fact f;
  f.subject = decode_entity(field(j, "subject", path), child(path, "subject"));
  f.object = decode_entity(field(j, "object", path), child(path, "object"));
  const auto rel_path = child(path, "relation");
  const auto rel = as_string(field(j, "relation", path), rel_path);
  f.relation = parsed(parse_relation_kind(rel), rel_path, rel);
  const auto pol = as_string(field(j, "polarity", path), child(path, "polarity"));
  if (pol == "positive") f.polarity = Polarity::Positive;
  else if (pol == "negative") f.polarity = Polarity::Negative;
  else throw SchemaError(child(path, "polarity"), "unknown value '" + pol + "'");
  if (auto v = fact_violation(f); !v.empty()) throw SchemaError(path, v);
  return f;
}

Json encode(const Scene& s) {
  Json blocks = Json::array();
  for (const auto& b : s.blocks) {
    Json objs = Json::array();
    for (const auto& id : b.objects) {
      const SpatialObject* o = s.find_object(id);
      if (o == nullptr) continue;
      Json jo{{"id", o->id}, {"x", o->position.x}, {"y", o->position.y}, {"radius", o->radius}};
      put_attrs(jo, o->attrs);
      objs.push_back(std::move(jo));
    }
    blocks.push_back(Json{{"name", b.name},
                          {"width", b.width},
                          {"height", b.height},
                          {"cell", Json{{"col", b.cell.col}, {"row", b.cell.row}}},
                          {"objects", std::move(objs)}});
  }
  Json arrangement = Json::array();
  for (const auto& f : s.arrangement)
    arrangement.push_back(Json{{"subject", f.subject.id},
                               {"relation", to_string(f.relation)},
                               {"object", f.object.id}});
  return Json{{"blocks", std::move(blocks)}, {"arrangement", std::move(arrangement)}};
}

Scene decode_scene(const Json& j, const std::string& path) {
  Scene s;
  const auto blocks_path = child(path, "blocks");
  const Json& blocks = as_array(field(j, "blocks", path), blocks_path);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto bp = child(blocks_path, i);
    const Json& jb = blocks[i];
    Block b;
    b.name = as_string(field(jb, "name", bp), child(bp, "name"));
    if (const Json* w = optional_field(jb, "width", bp)) b.width = as_number(*w, child(bp, "width"));
    if (const Json* h = optional_field(jb, "height", bp)) b.height = as_number(*h, child(bp, "height"));
    if (const Json* c = optional_field(jb, "cell", bp)) {
      const auto cp = child(bp, "cell");
      b.cell.col = static_cast<int>(as_int(field(*c, "col", cp), child(cp, "col")));
      b.cell.row = static_cast<int>(as_int(field(*c, "row", cp), child(cp, "row")));
    } else {
      b.cell = GridCell{static_cast<int>(i), 0};
    }
    const auto op = child(bp, "objects");
    const Json& objs = as_array(field(jb, "objects", bp), op);
    for (std::size_t k = 0; k < objs.size(); ++k) {
      const auto p = child(op, k);
      SpatialObject o;
      o.id = as_string(field(objs[k], "id", p), child(p, "id"));
      o.attrs = decode_attribute(objs[k], p);
      o.block_id = b.name;
      o.position.x = as_number(field(objs[k], "x", p), child(p, "x"));
      o.position.y = as_number(field(objs[k], "y", p), child(p, "y"));
      o.radius = as_number(field(objs[k], "radius", p), child(p, "radius"));
      b.objects.push_back(o.id);
      s.objects.push_back(std::move(o));
    }
    s.blocks.push_back(std::move(b));
  }
  if (const Json* arr = optional_field(j, "arrangement", path)) {
    const auto ap = child(path, "arrangement");
    as_array(*arr, ap);
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto p = child(ap, i);
      const Json& jf = (*arr)[i];
      Fact f;
      f.subject = EntityRef::block(as_string(field(jf, "subject", p), child(p, "subject")));
      f.object = EntityRef::block(as_string(field(jf, "object", p), child(p, "object")));
      const auto rel = as_string(field(jf, "relation", p), child(p, "relation"));
      auto r = parse_relation(rel);
      if (!r || !is_directional(*r)) throw SchemaError(child(p, "relation"), "expected a direction");
      f.relation = RelationKind{*r};
      s.arrangement.push_back(std::move(f));
    }
  } else {
    for (std::size_t a = 0; a < s.blocks.size(); ++a)
      for (std::size_t b = a + 1; b < s.blocks.size(); ++b) {
        const auto& ca = s.blocks[a].cell;
        const auto& cb = s.blocks[b].cell;
        Relation r;
        if (ca.col != cb.col) r = ca.col < cb.col ? Relation::Left : Relation::Right;
        else if (ca.row != cb.row) r = ca.row < cb.row ? Relation::Above : Relation::Below;
        else continue;
        s.arrangement.push_back(Fact{EntityRef::block(s.blocks[a].name), RelationKind{r},
                                     EntityRef::block(s.blocks[b].name)});
      }
  }
  return s;
}

Json encode(const Story& s) {
  Json facts = Json::array();
  for (const auto& f : s.facts) facts.push_back(encode(f));
  Json sentences = Json::array();
  for (const auto& sen : s.sentences) {
    Json spans = Json::array();
    for (const auto& r : sen.spans)
      spans.push_back(Json{{"fact", r.fact},
                           {"trajector", encode_span(r.trajector)},
                           {"indicator", encode_span(r.indicator)},
                           {"landmark", encode_span(r.landmark)}});
    Json ents = Json::array();
    for (const auto& e : sen.entities) ents.push_back(encode(e));
    sentences.push_back(Json{{"text", sen.text},
                             {"facts", sen.fact_ids},
                             {"spans", std::move(spans)},
                             {"entities", std::move(ents)}});
  }
  Json objects = Json::array();
  for (const auto& o : s.objects) {
    Json jo{{"ref", encode(o.ref)}, {"block", o.block}, {"ordinal", o.ordinal}};
    put_attrs(jo, o.attrs);
    objects.push_back(std::move(jo));
  }
  Json described = Json::array();
  for (const auto& e : s.described_entities) described.push_back(encode(e));
  return Json{{"facts", std::move(facts)},         {"sentences", std::move(sentences)},
              {"objects", std::move(objects)},     {"blocks", s.blocks},
              {"described_entities", described},   {"token_count", s.token_count}};
}

Story decode_story(const Json& j, const std::string& path) {
  Story s;
  s.facts = decode_list<Fact>(field(j, "facts", path), child(path, "facts"), decode_fact);
  s.sentences = decode_list<Sentence>(
      field(j, "sentences", path), child(path, "sentences"), [](const Json& js, const std::string& p) {
        Sentence sen;
        sen.text = as_string(field(js, "text", p), child(p, "text"));
        sen.fact_ids = decode_list<std::size_t>(field(js, "facts", p), child(p, "facts"), as_index);
        sen.spans = decode_list<RoleSpans>(
            field(js, "spans", p), child(p, "spans"), [](const Json& jr, const std::string& rp) {
              RoleSpans r;
              r.fact = as_index(field(jr, "fact", rp), child(rp, "fact"));
              r.trajector = decode_span(field(jr, "trajector", rp), child(rp, "trajector"));
              r.indicator = decode_span(field(jr, "indicator", rp), child(rp, "indicator"));
              r.landmark = decode_span(field(jr, "landmark", rp), child(rp, "landmark"));
              return r;
            });
        sen.entities = decode_list<EntityRef>(field(js, "entities", p), child(p, "entities"), decode_entity);
        return sen;
      });
  s.objects = decode_list<StoryEntity>(
      field(j, "objects", path), child(path, "objects"), [](const Json& jo, const std::string& p) {
        StoryEntity e;
        e.ref = decode_entity(field(jo, "ref", p), child(p, "ref"));
        e.attrs = decode_attribute(jo, p);
        e.block = as_string(field(jo, "block", p), child(p, "block"));
        e.ordinal = static_cast<int>(as_int(field(jo, "ordinal", p), child(p, "ordinal")));
        return e;
      });
  s.blocks = decode_list<std::string>(field(j, "blocks", path), child(path, "blocks"), as_string);
  s.described_entities = decode_list<EntityRef>(field(j, "described_entities", path),
                                                child(path, "described_entities"), decode_entity);
  s.token_count = as_index(field(j, "token_count", path), child(path, "token_count"));
  return s;
}

Json encode(const EntityDescriptor& d) {
  Json j = Json::object();
  if (d.shape) j["shape"] = to_string(*d.shape);
  if (d.hypernym != Hypernym::None) j["hypernym"] = to_string(d.hypernym);
  if (d.color) j["color"] = to_string(*d.color);
  if (d.size) j["size"] = to_string(*d.size);
  if (d.ordinal != 0) j["ordinal"] = d.ordinal;
  if (d.block) j["block"] = *d.block;
  if (d.nested && !d.nested->inner.empty())
    j["nested"] = Json{{"relation", to_string(d.nested->relation)},
                       {"inner", encode(d.nested->inner.front())}};
  j["number"] = d.number == Number::Singular ? "singular" : "plural";
  j["determiner"] = to_string(d.determiner);
  return j;
}

EntityDescriptor decode_descriptor(const Json& j, const std::string& path) {
  EntityDescriptor d;
  if (const Json* v = optional_field(j, "shape", path)) {
    auto s = as_string(*v, child(path, "shape"));
    d.shape = parsed(parse_shape(s), child(path, "shape"), s);
  }
  if (const Json* v = optional_field(j, "hypernym", path)) {
    auto s = as_string(*v, child(path, "hypernym"));
    d.hypernym = parsed(parse_hypernym(s), child(path, "hypernym"), s);
  }
  if (const Json* v = optional_field(j, "color", path)) {
    auto s = as_string(*v, child(path, "color"));
    d.color = parsed(parse_color(s), child(path, "color"), s);
  }
  if (const Json* v = optional_field(j, "size", path)) {
    auto s = as_string(*v, child(path, "size"));
    d.size = parsed(parse_size(s), child(path, "size"), s);
  }
  if (const Json* v = optional_field(j, "ordinal", path))
    d.ordinal = static_cast<int>(as_int(*v, child(path, "ordinal")));
  if (const Json* v = optional_field(j, "block", path)) d.block = as_string(*v, child(path, "block"));
  if (const Json* v = optional_field(j, "nested", path)) {
    const auto np = child(path, "nested");
    NestedClause n;
    const auto rel = as_string(field(*v, "relation", np), child(np, "relation"));
    n.relation = parsed(parse_relation_kind(rel), child(np, "relation"), rel);
    n.inner.push_back(decode_descriptor(field(*v, "inner", np), child(np, "inner")));
    d.nested = std::move(n);
  }
  const auto num = as_string(field(j, "number", path), child(path, "number"));
  if (num == "singular") d.number = Number::Singular;
  else if (num == "plural") d.number = Number::Plural;
  else throw SchemaError(child(path, "number"), "unknown value '" + num + "'");
  const auto det = as_string(field(j, "determiner", path), child(path, "determiner"));
  d.determiner = parsed(parse_determiner(det), child(path, "determiner"), det);
  return d;
}

Json encode(const LogicalForm& lf) {
  Json args = Json::array();
  for (const auto& a : lf.args) args.push_back(encode(a));
  Json j{{"form", lf.form}, {"args", std::move(args)}};
  if (lf.relation) j["relation"] = to_string(*lf.relation);
  return j;
}

LogicalForm decode_logical_form(const Json& j, const std::string& path) {
  LogicalForm lf;
  lf.form = as_string(field(j, "form", path), child(path, "form"));
  lf.args = decode_list<EntityDescriptor>(field(j, "args", path), child(path, "args"), decode_descriptor);
  if (const Json* v = optional_field(j, "relation", path)) {
    auto s = as_string(*v, child(path, "relation"));
    lf.relation = parsed(parse_relation_kind(s), child(path, "relation"), s);
  }
  return lf;
}

Json encode(const AnswerSet& a) {
  Json just = Json::array();
  for (const auto& x : a.justification) just.push_back(Json{{"fact", encode(x.fact)}, {"depth", x.depth}});
  return Json{{"labels", a.labels}, {"justification", std::move(just)}, {"vacuous", a.vacuous}};
}

AnswerSet decode_answer(const Json& j, const std::string& path) {
  AnswerSet a;
  a.labels = decode_list<std::string>(field(j, "labels", path), child(path, "labels"), as_string);
  a.justification = decode_list<Justification>(
      field(j, "justification", path), child(path, "justification"), [](const Json& jj, const std::string& p) {
        return Justification{decode_fact(field(jj, "fact", p), child(p, "fact")),
                             static_cast<int>(as_int(field(jj, "depth", p), child(p, "depth")))};
      });
  a.vacuous = as_bool(field(j, "vacuous", path), child(path, "vacuous"));
  return a;
}

Json encode(const Question& q) {
  return Json{{"qtype", to_string(q.qtype)},
              {"text", q.text},
              {"logical_form", encode(q.logical_form)},
              {"candidates", q.candidates},
              {"gold", encode(q.gold)},
              {"reasoning_depth", q.reasoning_depth},
              {"eval_excluded", q.eval_excluded}};
}

Question decode_question(const Json& j, const std::string& path) {
  Question q;
  const auto qt = as_string(field(j, "qtype", path), child(path, "qtype"));
  q.qtype = parsed(parse_qtype(qt), child(path, "qtype"), qt);
  q.text = as_string(field(j, "text", path), child(path, "text"));
  q.logical_form = decode_logical_form(field(j, "logical_form", path), child(path, "logical_form"));
  q.candidates = decode_list<std::string>(field(j, "candidates", path), child(path, "candidates"), as_string);
  q.gold = decode_answer(field(j, "gold", path), child(path, "gold"));
  q.reasoning_depth = static_cast<int>(as_int(field(j, "reasoning_depth", path), child(path, "reasoning_depth")));
  q.eval_excluded =
      decode_list<std::string>(field(j, "eval_excluded", path), child(path, "eval_excluded"), as_string);
  return q;
}

Json encode(const Annotations& a) {
  Json nodes = Json::array();
  for (const auto& n : a.scene_graph.nodes) {
    Json jn{{"ref", encode(n.ref)}};
    if (n.attrs) {
      jn["attrs"] = encode(*n.attrs);
      jn["block"] = n.block;
      jn["ordinal"] = n.ordinal;
    }
    nodes.push_back(std::move(jn));
  }
  Json edges = Json::array();
  for (const auto& f : a.scene_graph.edges) edges.push_back(encode(f));
  Json sprl = Json::array();
  for (const auto& s : a.sprl) {
    Json triplets = Json::array();
    for (const auto& t : s.triplets)
      triplets.push_back(Json{{"fact", t.fact},
                              {"trajector", Json{{"span", encode_span(t.trajector)}, {"text", t.trajector_text}}},
                              {"indicator", Json{{"span", encode_span(t.indicator)}, {"text", t.indicator_text}}},
                              {"landmark", Json{{"span", encode_span(t.landmark)}, {"text", t.landmark_text}}}});
    sprl.push_back(Json{{"sentence", s.sentence}, {"triplets", std::move(triplets)}});
  }
  return Json{{"scene_graph", Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}},
              {"sprl", std::move(sprl)}};
}

Annotations decode_annotations(const Json& j, const std::string& path) {
  Annotations a;
  const auto gp = child(path, "scene_graph");
  const Json& g = field(j, "scene_graph", path);
  a.scene_graph.nodes = decode_list<SceneGraphNode>(
      field(g, "nodes", gp), child(gp, "nodes"), [](const Json& jn, const std::string& p) {
        SceneGraphNode n;
        n.ref = decode_entity(field(jn, "ref", p), child(p, "ref"));
        if (const Json* at = optional_field(jn, "attrs", p)) {
          n.attrs = decode_attribute(*at, child(p, "attrs"));
          n.block = as_string(field(jn, "block", p), child(p, "block"));
          n.ordinal = static_cast<int>(as_int(field(jn, "ordinal", p), child(p, "ordinal")));
        }
        return n;
      });
  a.scene_graph.edges = decode_list<Fact>(field(g, "edges", gp), child(gp, "edges"), decode_fact);
  a.sprl = decode_list<SpRLAnnotation>(
      field(j, "sprl", path), child(path, "sprl"), [](const Json& js, const std::string& p) {
        SpRLAnnotation s;
        s.sentence = as_index(field(js, "sentence", p), child(p, "sentence"));
        s.triplets = decode_list<SpRLTriplet>(
            field(js, "triplets", p), child(p, "triplets"), [](const Json& jt, const std::string& tp) {
              SpRLTriplet t;
              t.fact = as_index(field(jt, "fact", tp), child(tp, "fact"));
              auto role = [&](std::string_view name, Span& span, std::string& text) {
                const auto rp = child(tp, name);
                const Json& jr = field(jt, name, tp);
                span = decode_span(field(jr, "span", rp), child(rp, "span"));
                text = as_string(field(jr, "text", rp), child(rp, "text"));
              };
              role("trajector", t.trajector, t.trajector_text);
              role("indicator", t.indicator, t.indicator_text);
              role("landmark", t.landmark, t.landmark_text);
              return t;
            });
        return s;
      });
  return a;
}

Json encode(const DatasetRecord& r) {
  Json questions = Json::array();
  for (const auto& q : r.questions) questions.push_back(encode(q));
  Json consistency = Json::array();
  for (const auto& v : r.variants.consistency) consistency.push_back(encode_variant(v));
  Json contrast = Json::array();
  for (const auto& v : r.variants.contrast) contrast.push_back(encode_variant(v));
  Json variants{{"consistency", std::move(consistency)}, {"contrast", std::move(contrast)}};
  if (r.variants.unseen)
    variants["unseen"] = Json{{"vocabulary", r.variants.unseen->vocabulary},
                              {"source_id", r.variants.unseen->source_id}};
  return Json{{"id", r.id},
              {"schema_version", kSchemaVersion},
              {"scene", encode(r.scene)},
              {"story", encode(r.story)},
              {"questions", std::move(questions)},
              {"annotations", encode(r.annotations)},
              {"variants", std::move(variants)},
              {"vocabulary", r.vocabulary},
              {"provenance", Json{{"seed", r.provenance.seed},
                                  {"config_hash", r.provenance.config_hash},
                                  {"generator_version", r.provenance.generator_version},
                                  {"split", r.provenance.split},
                                  {"index", r.provenance.index}}}};
}

DatasetRecord decode_record(const Json& j, const std::string& path) {
  DatasetRecord r;
  r.id = as_string(field(j, "id", path), child(path, "id"));
  const auto version = as_int(field(j, "schema_version", path), child(path, "schema_version"));
  if (version != kSchemaVersion)
    throw SchemaError(child(path, "schema_version"), "unsupported version " + std::to_string(version));
  r.scene = decode_scene(field(j, "scene", path), child(path, "scene"));
  r.story = decode_story(field(j, "story", path), child(path, "story"));
  r.questions = decode_list<Question>(field(j, "questions", path), child(path, "questions"),
                                      [](const Json& jq, const std::string& p) { return decode_question(jq, p); });
  r.annotations = decode_annotations(field(j, "annotations", path), child(path, "annotations"));
  const auto vp = child(path, "variants");
  const Json& v = field(j, "variants", path);
  r.variants.consistency = decode_list<VariantItem>(field(v, "consistency", vp), child(vp, "consistency"), decode_variant);
  r.variants.contrast = decode_list<VariantItem>(field(v, "contrast", vp), child(vp, "contrast"), decode_variant);
  if (const Json* u = optional_field(v, "unseen", vp)) {
    const auto up = child(vp, "unseen");
    r.variants.unseen = UnseenInfo{as_string(field(*u, "vocabulary", up), child(up, "vocabulary")),
                                   as_string(field(*u, "source_id", up), child(up, "source_id"))};
  }
  r.vocabulary = as_string(field(j, "vocabulary", path), child(path, "vocabulary"));
  const auto pp = child(path, "provenance");
  const Json& p = field(j, "provenance", path);
  const Json& seed = field(p, "seed", pp);
  if (!seed.is_number_unsigned() && !seed.is_number_integer())
    throw SchemaError(child(pp, "seed"), "expected an integer");
  r.provenance.seed = seed.get<std::uint64_t>();
  r.provenance.config_hash = as_string(field(p, "config_hash", pp), child(pp, "config_hash"));
  r.provenance.generator_version = as_string(field(p, "generator_version", pp), child(pp, "generator_version"));
  r.provenance.split = as_string(field(p, "split", pp), child(pp, "split"));
  r.provenance.index = as_index(field(p, "index", pp), child(pp, "index"));
  return r;
}

std::string to_line(const DatasetRecord& r) { return encode(r).dump(); }

DatasetRecord record_from_line(const std::string& line, std::size_t line_number) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw SchemaError("line " + std::to_string(line_number), std::string("invalid JSON: ") + e.what());
  }
  return decode_record(j, "line " + std::to_string(line_number));
}

}  // namespace spatialqa
