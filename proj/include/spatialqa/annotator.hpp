#pragma once

#include <vector>

#include "spatialqa/model.hpp"

namespace spatialqa {

class AlignmentMissing : public Error {
 public:
  using Error::Error;
};

/// Described blocks and objects with the stated facts as edges.
SceneGraph build_scene_graph(const Story& story);

/// One triplet per verbalized relation, spans taken from the realizer. Only
/// containment stated implicitly by an inline introduction may lack spans.
std::vector<SpRLAnnotation> emit_sprl(const Story& story);

/// Problems with one triplet against its sentence: out-of-bounds or
/// overlapping spans, or text that does not slice to the stored strings.
std::vector<std::string> check_triplet(const SpRLTriplet& t, const std::string& sentence);

}  // namespace spatialqa
