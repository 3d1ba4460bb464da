#include "spatialqa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <thread>

#include "spatialqa/annotator.hpp"
#include "spatialqa/answers.hpp"
#include "spatialqa/json_io.hpp"
#include "spatialqa/text.hpp"

namespace spatialqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t split_index(std::string_view split) {
  for (std::size_t i = 0; i < std::size(kSplits); ++i)
    if (kSplits[i] == split) return i;
  throw Error("unknown split '" + std::string(split) + "'");
}

std::string record_id(std::string_view split, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu", index + 1);
  return std::string(split) + "-" + buf;
}

// Largest-remainder split of n questions over the qtype weights; the
// remainder goes to a different type on each record.
std::vector<QType> qtype_plan(const std::array<double, 4>& mix, std::size_t n, std::size_t rotate) {
  double total = 0.0;
  for (double w : mix) total += w;
  std::array<std::size_t, 4> count{};
  std::array<double, 4> frac{};
  std::size_t given = 0;
  for (std::size_t t = 0; t < 4; ++t) {
    const double exact = static_cast<double>(n) * mix[t] / total;
    count[t] = static_cast<std::size_t>(std::floor(exact));
    frac[t] = exact - static_cast<double>(count[t]);
    given += count[t];
  }
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(rotate % 4), order.end());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; given < n; ++k) {
    const std::size_t t = order[k % 4];
    if (mix[t] <= 0.0) continue;
    ++count[t];
    ++given;
  }

  // Interleave so a short story still sees every type.
  std::vector<QType> plan;
  while (plan.size() < n)
    for (std::size_t t = 0; t < 4; ++t)
      if (count[t] > 0) {
        --count[t];
        plan.push_back(kAllQTypes[t]);
      }
  return plan;
}

bool in_band(const Story& s, const PipelineConfig& c) {
  const auto sentences = static_cast<int>(s.sentences.size());
  const auto tokens = static_cast<int>(s.token_count);
  return sentences >= c.sentence_band.min && sentences <= c.sentence_band.max && tokens >= c.token_band.min &&
         tokens <= c.token_band.max;
}

std::size_t story_count(std::size_t questions, int per_story) {
  const auto q = static_cast<std::size_t>(per_story);
  return (questions + q - 1) / q;
}

std::size_t questions_for(std::size_t total, int per_story, std::size_t index) {
  const auto q = static_cast<std::size_t>(per_story);
  return std::min(q, total - index * q);
}

}  // namespace

namespace {

// Story, questions, variants and annotations for one scene; nullopt when the
// story misses the length band or cannot host a planned question.
std::optional<DatasetRecord> build_record(const PipelineConfig& c, Scene scene, std::uint64_t seed,
                                          const std::vector<QType>& plan, bool enforce_band) {
  const Grammar& grammar = config_grammar(c);
  SamplerConfig scfg = c.sampler;
  scfg.seed = seed;
  ClosureOptions copts;
  copts.touching_implies_near = c.realizer.touching_implies_near;
  QuestionOptions qopts = c.questions;
  qopts.touching_implies_near = c.realizer.touching_implies_near;

  DatasetRecord r;
  r.scene = std::move(scene);
  const std::vector<Fact> facts = select_story_facts(extract_geometric_facts(r.scene, scfg), scfg);
  r.story = realize_story(r.scene, facts, grammar, c.realizer, derive_seed(seed, 1));
  if (enforce_band && !in_band(r.story, c)) return std::nullopt;
  const EntailedSet cl = closure(r.story.facts, copts);

  for (std::size_t k = 0; k < plan.size(); ++k) {
    try {
      Question q = make_question(plan[k], r.story, cl, grammar, qopts, derive_seed(seed, 2, k));
      q.gold = answer(q.logical_form, r.story, cl);
      q.reasoning_depth = reasoning_depth(q.gold);
      r.questions.push_back(std::move(q));
    } catch (const NoValidSelection&) {
      return std::nullopt;
    } catch (const NotDescribable&) {
      return std::nullopt;
    }
  }

  Rng vrng(derive_seed(seed, 3));
  for (std::size_t k = 0; k < r.questions.size(); ++k) {
    if (c.consistency) try {
        auto items = make_consistency(r.questions[k], k, r.story, cl, grammar, vrng);
        r.variants.consistency.push_back(vrng.pick(items));
      } catch (const NoVariant&) {
      }
    if (c.contrast) try {
        auto items = make_contrast(r.questions[k], k, r.story, cl, grammar, vrng);
        r.variants.contrast.push_back(vrng.pick(items));
      } catch (const NoVariant&) {
      }
  }

  r.annotations.scene_graph = build_scene_graph(r.story);
  r.annotations.sprl = emit_sprl(r.story);
  return r;
}

// The config as recorded in the manifest: where files go and how many
// threads wrote them is left out so equal configs give equal manifests.
json manifest_config(const PipelineConfig& c) {
  json j = config_to_json(c);
  j.erase("output");
  j.erase("threads");
  return j;
}

}  // namespace

DatasetRecord generate_record(const PipelineConfig& c, std::string_view split, std::size_t index,
                              std::size_t question_count, std::size_t* rejected) {
  const std::uint64_t split_seed = derive_seed(c.seed, split_index(split));
  const std::vector<QType> plan = qtype_plan(c.qtype_mix, question_count, index);

  for (int attempt = 0; attempt < c.max_attempts; ++attempt) {
    const std::uint64_t seed = derive_seed(split_seed, index, static_cast<std::uint64_t>(attempt));
    try {
      SamplerConfig scfg = c.sampler;
      scfg.seed = seed;
      Scene scene;
      try {
        scene = sample_scene(scfg);
      } catch (const PlacementFailure&) {
        if (rejected) ++*rejected;
        continue;
      }
      std::optional<DatasetRecord> r = build_record(c, std::move(scene), seed, plan, true);
      if (!r) {
        if (rejected) ++*rejected;
        continue;
      }
      r->id = record_id(split, index);
      r->provenance = Provenance{seed, config_hash(c), std::string(kGeneratorVersion), std::string(split), index};
      if (split == "test_unseen") return make_unseen(*r, config_vocabulary(c), c.unseen_fraction, c.seed);
      return *std::move(r);
    } catch (const std::exception& e) {
      throw PipelineError(record_id(split, index) + ": " + e.what(), seed);
    }
  }
  throw PipelineError(record_id(split, index) + ": no acceptable scene in " + std::to_string(c.max_attempts) +
                          " attempts",
                      derive_seed(split_seed, index, 0));
}

DatasetRecord record_from_scene(const PipelineConfig& c, const Scene& scene, std::size_t question_count) {
  if (auto problems = validate_scene(scene); !problems.empty()) throw SchemaError("scene", problems.front());
  const std::uint64_t base = derive_seed(c.seed, fnv1a("import"));
  const std::vector<QType> plan = qtype_plan(c.qtype_mix, question_count, 0);
  for (int attempt = 0; attempt < c.max_attempts; ++attempt) {
    const std::uint64_t seed = derive_seed(base, static_cast<std::uint64_t>(attempt));
    std::optional<DatasetRecord> r;
    try {
      r = build_record(c, scene, seed, plan, false);
    } catch (const std::exception& e) {
      throw PipelineError(std::string("imported scene: ") + e.what(), seed);
    }
    if (!r) continue;
    r->id = "import-000001";
    r->provenance = Provenance{seed, config_hash(c), std::string(kGeneratorVersion), "import", 0};
    return *std::move(r);
  }
  throw PipelineError("imported scene cannot host the planned questions", base);
}

GenerateSummary generate(const PipelineConfig& c, const ProgressFn& progress) {
  if (auto problems = validate_pipeline_config(c); !problems.empty()) throw SchemaError("config", problems.front());
  fs::create_directories(c.output_dir);
  // Load shared resources before workers start.
  config_grammar(c);
  if (c.counts.count("test_unseen")) config_vocabulary(c);

  unsigned threads = c.threads > 0 ? static_cast<unsigned>(c.threads) : std::thread::hardware_concurrency();
  threads = std::max(1u, threads);

  GenerateSummary out;
  json splits = json::object();
  for (std::string_view split_name : kSplits) {
    const std::string split(split_name);
    const auto it = c.counts.find(split);
    const std::size_t total_q = it == c.counts.end() ? 0 : it->second;
    const std::size_t n = story_count(total_q, c.questions_per_story);
    const std::string path = (fs::path(c.output_dir) / (split + ".jsonl")).string();
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot write " + path);

    json qtypes = json::object();
    json label_hist = json::object();
    for (QType t : kAllQTypes) {
      qtypes[std::string(to_string(t))] = 0;
      label_hist[std::string(to_string(t))] = json::object();
    }
    std::size_t questions = 0, consistency = 0, contrast = 0;
    std::atomic<std::size_t> rejected{0};

    const std::size_t batch = std::max<std::size_t>(64, 32 * threads);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      std::vector<DatasetRecord> recs(stop - start);
      std::atomic<std::size_t> next{start};
      std::exception_ptr failure;
      std::mutex failure_mu;
      auto work = [&] {
        for (std::size_t i = next++; i < stop; i = next++) {
          try {
            std::size_t rej = 0;
            recs[i - start] = generate_record(c, split, i, questions_for(total_q, c.questions_per_story, i), &rej);
            rejected += rej;
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = stop;
          }
        }
      };
      std::vector<std::thread> pool;
      for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
      work();
      for (auto& t : pool) t.join();
      if (failure) std::rethrow_exception(failure);

      for (const DatasetRecord& r : recs) {
        file << to_line(r) << '\n';
        questions += r.questions.size();
        consistency += r.variants.consistency.size();
        contrast += r.variants.contrast.size();
        for (const Question& q : r.questions) {
          const std::string t(to_string(q.qtype));
          qtypes[t] = qtypes[t].get<std::size_t>() + 1;
          json& h = label_hist[t];
          for (const std::string& l : q.gold.labels) h[l] = h.value(l, std::size_t{0}) + 1;
        }
      }
      if (progress) progress(split, stop, n);
    }
    if (!file.flush()) throw Error("write failed: " + path);

    splits[split] = json{{"file", split + ".jsonl"},
                         {"records", n},
                         {"questions", questions},
                         {"qtypes", qtypes},
                         {"labels", label_hist},
                         {"consistency", consistency},
                         {"contrast", contrast},
                         {"rejected_scenes", rejected.load()}};
    out.files[split] = path;
  }

  out.manifest = json{{"schema_version", kSchemaVersion},
                      {"generator_version", std::string(kGeneratorVersion)},
                      {"seed", c.seed},
                      {"config_hash", config_hash(c)},
                      {"config", manifest_config(c)},
                      {"splits", splits}};
  const std::string mpath = (fs::path(c.output_dir) / "manifest.json").string();
  std::ofstream m(mpath, std::ios::trunc);
  m << out.manifest.dump(2) << '\n';
  if (!m.flush()) throw Error("write failed: " + mpath);
  out.files["manifest"] = mpath;
  return out;
}

std::vector<DatasetRecord> read_dataset(const std::string& path) {
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<DatasetRecord> out;
  for (const std::string& f : files) {
    std::ifstream in(f);
    if (!in) throw SchemaError(f, "cannot open");
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      try {
        out.push_back(record_from_line(line, n));
      } catch (const SchemaError& e) {
        throw SchemaError(f + ":" + std::to_string(n), e.what());
      }
    }
  }
  return out;
}

namespace {

struct Summary {
  double sum = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;

  void add(double v) {
    min = n == 0 ? v : std::min(min, v);
    max = n == 0 ? v : std::max(max, v);
    sum += v;
    ++n;
  }
  double mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }
  json to_json() const { return json{{"mean", mean()}, {"min", min}, {"max", max}, {"count", n}}; }
};

json band(const Summary& s, double reference) {
  const double lo = reference * 0.75, hi = reference * 1.25;
  return json{{"mean", s.mean()}, {"reference", reference}, {"low", lo}, {"high", hi},
              {"ok", s.n > 0 && s.mean() >= lo && s.mean() <= hi}};
}

}  // namespace

json stats(const std::vector<DatasetRecord>& records) {
  Summary sentences, tokens, qlen;
  std::map<std::string, Summary> qlen_by_type;
  json qtypes = json::object(), labels = json::object(), depth = json::object();
  std::map<int, std::size_t> depth_hist;
  std::size_t questions = 0, consistency = 0, contrast = 0, unseen = 0;

  for (const DatasetRecord& r : records) {
    sentences.add(static_cast<double>(r.story.sentences.size()));
    tokens.add(static_cast<double>(r.story.token_count));
    consistency += r.variants.consistency.size();
    contrast += r.variants.contrast.size();
    if (r.variants.unseen) ++unseen;
    for (const Question& q : r.questions) {
      ++questions;
      const std::string t(to_string(q.qtype));
      const auto len = static_cast<double>(count_tokens(q.text));
      qlen.add(len);
      qlen_by_type[t].add(len);
      qtypes[t] = qtypes.value(t, std::size_t{0}) + 1;
      json& h = labels[t];
      if (h.is_null()) h = json::object();
      for (const std::string& l : q.gold.labels) h[l] = h.value(l, std::size_t{0}) + 1;
      ++depth_hist[q.reasoning_depth];
    }
  }
  for (const auto& [d, n] : depth_hist) depth[std::to_string(d)] = n;
  json by_type = json::object();
  for (const auto& [t, s] : qlen_by_type) by_type[t] = s.to_json();

  return json{{"records", records.size()},
              {"questions", questions},
              {"consistency", consistency},
              {"contrast", contrast},
              {"unseen_records", unseen},
              {"sentences_per_story", sentences.to_json()},
              {"tokens_per_story", tokens.to_json()},
              {"tokens_per_question", qlen.to_json()},
              {"tokens_per_question_by_type", by_type},
              {"qtypes", qtypes},
              {"labels", labels},
              {"reasoning_depth", depth},
              {"bands",
               {{"sentences_per_story", band(sentences, 9.0)},
                {"tokens_per_story", band(tokens, 118.0)},
                {"tokens_per_question", band(qlen, 23.0)}}}};
}

}  // namespace spatialqa
