#pragma once

#include <string>

#include "json.hpp"
#include "spatialqa/model.hpp"

namespace spatialqa {

using Json = nlohmann::json;

// Canonical JSON encoding of the domain types (docs/dataset_schema.md).
// Decoders throw SchemaError naming the offending field path.

Json encode(const EntityRef& e);
Json encode(const Attribute& a);
Json encode(const Fact& f);
Json encode(const Scene& s);
Json encode(const Story& s);
Json encode(const EntityDescriptor& d);
Json encode(const LogicalForm& lf);
Json encode(const AnswerSet& a);
Json encode(const Question& q);
Json encode(const Annotations& a);
Json encode(const DatasetRecord& r);

EntityRef decode_entity(const Json& j, const std::string& path);
Attribute decode_attribute(const Json& j, const std::string& path);
Fact decode_fact(const Json& j, const std::string& path);
Scene decode_scene(const Json& j, const std::string& path = "scene");
Story decode_story(const Json& j, const std::string& path = "story");
EntityDescriptor decode_descriptor(const Json& j, const std::string& path);
LogicalForm decode_logical_form(const Json& j, const std::string& path);
AnswerSet decode_answer(const Json& j, const std::string& path);
Question decode_question(const Json& j, const std::string& path = "question");
Annotations decode_annotations(const Json& j, const std::string& path);
DatasetRecord decode_record(const Json& j, const std::string& path = "record");

/// One JSONL line: compact, keys sorted.
std::string to_line(const DatasetRecord& r);
DatasetRecord record_from_line(const std::string& line, std::size_t line_number);

}  // namespace spatialqa
