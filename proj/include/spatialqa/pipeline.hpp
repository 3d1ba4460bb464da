#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "spatialqa/grammar.hpp"
#include "spatialqa/model.hpp"
#include "spatialqa/questions.hpp"
#include "spatialqa/realizer.hpp"
#include "spatialqa/sampler.hpp"
#include "spatialqa/variants.hpp"

namespace spatialqa {

inline constexpr std::string_view kSplits[] = {"train", "dev", "test_seen", "test_unseen"};

struct PipelineConfig {
  std::uint64_t seed = 2021;
  /// Questions to emit per split (stories = ceil(count / questions_per_story)).
  std::map<std::string, std::size_t> counts{
      {"train", 93673}, {"dev", 15023}, {"test_seen", 15074}, {"test_unseen", 15087}};
  int questions_per_story = 8;
  /// Relative weights of FR, FB, CO, YN inside each story.
  std::array<double, 4> qtype_mix{1.0, 1.0, 1.0, 1.0};

  SamplerConfig sampler;
  RealizerOptions realizer;
  QuestionOptions questions;

  bool consistency = true;
  bool contrast = true;
  /// Fraction of test_unseen records rewritten into the unseen vocabulary.
  double unseen_fraction = 1.0;

  IntRange sentence_band{3, 22};
  IntRange token_band{66, 274};
  /// Scenes tried per record before giving up.
  int max_attempts = 200;

  /// Empty paths select the files shipped in the data directory.
  std::string grammar_path;
  std::string vocabulary_path;
  std::string output_dir = "out";
  /// 0 = hardware concurrency.
  int threads = 0;
};

class PipelineError : public Error {
 public:
  PipelineError(const std::string& what, std::uint64_t seed)
      : Error(what + " (record seed " + std::to_string(seed) + ")"), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

nlohmann::json config_to_json(const PipelineConfig& c);
/// Missing keys keep their defaults; unknown keys and bad values throw SchemaError.
PipelineConfig config_from_json(const nlohmann::json& j, const std::string& source = "config");
PipelineConfig load_config(const std::string& path);
/// Empty iff the config is usable.
std::vector<std::string> validate_pipeline_config(const PipelineConfig& c);
/// Hex FNV-1a of the canonical config JSON.
std::string config_hash(const PipelineConfig& c);

/// The grammar and vocabulary a config selects.
const Grammar& config_grammar(const PipelineConfig& c);
const VocabularyMap& config_vocabulary(const PipelineConfig& c);

/// Builds record `index` of `split`; deterministic in (config, split, index).
/// `rejected` counts scenes discarded before the accepted one.
DatasetRecord generate_record(const PipelineConfig& c, std::string_view split, std::size_t index,
                              std::size_t question_count, std::size_t* rejected = nullptr);

/// A record built from a given scene (facts selected and realized as for
/// generated scenes, without the length band).
DatasetRecord record_from_scene(const PipelineConfig& c, const Scene& scene, std::size_t question_count);

struct GenerateSummary {
  nlohmann::json manifest;
  std::map<std::string, std::string> files;  // split -> path
};

using ProgressFn = std::function<void(std::string_view split, std::size_t done, std::size_t total)>;

/// Writes <output_dir>/<split>.jsonl for every split and manifest.json.
GenerateSummary generate(const PipelineConfig& c, const ProgressFn& progress = {});

/// Reads a JSONL file, or every *.jsonl file of a directory in name order.
/// Throws SchemaError naming the file and line.
std::vector<DatasetRecord> read_dataset(const std::string& path);

/// Sentence/token/question statistics, histograms and reference-band checks.
nlohmann::json stats(const std::vector<DatasetRecord>& records);

struct CheckResult {
  std::string name;
  std::size_t checked = 0;
  std::vector<std::string> failures;  // first few counterexamples
  std::size_t failure_count = 0;
  bool passed() const { return failure_count == 0; }
};

/// Round trip, solver agreement, geometric soundness, SpRL offsets, variant
/// properties and (when given) manifest recount.
std::vector<CheckResult> verify(const std::vector<DatasetRecord>& records, const PipelineConfig& c,
                                const nlohmann::json* manifest = nullptr);
nlohmann::json report_json(const std::vector<CheckResult>& checks);

}  // namespace spatialqa
