// spatialqa: generate, inspect and check synthetic spatial QA datasets.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "spatialqa/json_io.hpp"
#include "spatialqa/parser.hpp"
#include "spatialqa/pipeline.hpp"
#include "spatialqa/sampler.hpp"

using namespace spatialqa;

namespace {

int verbosity = 1;

void log(int level, const std::string& msg) {
  if (level <= verbosity) std::cerr << (level == 0 ? "error: " : "") << msg << '\n';
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ConfigArgs {
  std::string path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> questions_per_story;
  std::optional<std::string> grammar;
  std::optional<std::string> vocabulary;

  void add(CLI::App* app) {
    app->add_option("-c,--config", path, "Config JSON (default: $SPATIALQA_CONFIG)");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--threads", threads, "Worker threads, 0 = all cores");
    app->add_option("--questions-per-story", questions_per_story, "Questions per story");
    app->add_option("--grammar", grammar, "Grammar file");
    app->add_option("--vocabulary", vocabulary, "Unseen vocabulary map");
  }

  PipelineConfig load() const {
    std::string p = path;
    if (p.empty())
      if (const char* env = std::getenv("SPATIALQA_CONFIG")) p = env;
    PipelineConfig c = p.empty() ? PipelineConfig{} : load_config(p);
    if (seed) c.seed = *seed;
    if (threads) c.threads = *threads;
    if (questions_per_story) c.questions_per_story = *questions_per_story;
    if (grammar) c.grammar_path = *grammar;
    if (vocabulary) c.vocabulary_path = *vocabulary;
    if (auto problems = validate_pipeline_config(c); !problems.empty()) {
      for (const auto& m : problems) log(0, "config: " + m);
      throw SchemaError(p.empty() ? "config" : p, "invalid config");
    }
    return c;
  }
};

void write_lines(const std::vector<DatasetRecord>& records, const std::string& path) {
  std::ofstream file;
  if (path != "-") {
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot write " + path);
  }
  std::ostream& out = path == "-" ? std::cout : file;
  for (const DatasetRecord& r : records) out << to_line(r) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic spatial reasoning QA generator"};
  app.require_subcommand(1);
  bool quiet = false, verbose = false;
  app.add_flag("-q,--quiet", quiet, "Errors only");
  app.add_flag("-v,--verbose", verbose, "More progress output");

  ConfigArgs cfg;

  auto* gen = app.add_subcommand("generate", "Write <out>/<split>.jsonl and manifest.json");
  cfg.add(gen);
  std::string out_dir;
  std::vector<std::string> counts;
  gen->add_option("-o,--out", out_dir, "Output directory");
  gen->add_option("--count", counts, "Questions for a split, e.g. --count train=800,dev=200")->delimiter(',');
  bool gen_verify = false;
  gen->add_flag("--verify", gen_verify, "Run verify on the result");

  auto* st = app.add_subcommand("stats", "Corpus statistics as JSON");
  std::string stats_path;
  st->add_option("path", stats_path, "JSONL file or dataset directory")->required();

  auto* ver = app.add_subcommand("verify", "Check a dataset; exit 1 on any failure");
  cfg.add(ver);
  std::string verify_path, manifest_path;
  ver->add_option("path", verify_path, "JSONL file or dataset directory")->required();
  ver->add_option("--manifest", manifest_path, "Manifest to recount (default: <dir>/manifest.json)");

  auto* sol = app.add_subcommand("solve", "Answer a question about a story text");
  cfg.add(sol);
  std::string story_text, story_file, question;
  auto* story_opt = sol->add_option("--story", story_text, "Story text");
  sol->add_option("--story-file", story_file, "File holding the story")->excludes(story_opt);
  sol->add_option("question", question, "Question text")->required();
  bool why = false;
  sol->add_flag("--why", why, "Print the justification");

  auto* per = app.add_subcommand("perturb", "Rewrite a dataset into the unseen vocabulary");
  cfg.add(per);
  std::string perturb_in, perturb_out = "-";
  double fraction = 1.0;
  per->add_option("path", perturb_in, "JSONL file or dataset directory")->required();
  per->add_option("-o,--out", perturb_out, "Output JSONL (- for stdout)");
  per->add_option("--fraction", fraction, "Share of records to rewrite")->check(CLI::Range(0.0, 1.0));

  auto* imp = app.add_subcommand("import-scene", "Build one record from a scene JSON file");
  cfg.add(imp);
  std::string scene_path, import_out = "-";
  std::size_t import_questions = 8;
  imp->add_option("scene", scene_path, "Scene JSON")->required();
  imp->add_option("-o,--out", import_out, "Output JSONL (- for stdout)");
  imp->add_option("-n,--questions", import_questions, "Questions to ask");

  auto* conf = app.add_subcommand("config", "Print the effective config as JSON");
  cfg.add(conf);

  CLI11_PARSE(app, argc, argv);
  verbosity = quiet ? 0 : verbose ? 2 : 1;

  try {
    if (*gen) {
      PipelineConfig c = cfg.load();
      if (!out_dir.empty()) c.output_dir = out_dir;
      for (const std::string& kv : counts) {
        const auto eq = kv.find('=');
        std::size_t used = 0;
        std::size_t n = 0;
        try {
          if (eq != std::string::npos) n = std::stoul(kv.substr(eq + 1), &used);
        } catch (const std::exception&) {
        }
        if (eq == std::string::npos || used == 0 || used != kv.size() - eq - 1)
          throw Error("--count expects split=N, got '" + kv + "'");
        c.counts[kv.substr(0, eq)] = n;
      }
      if (auto problems = validate_pipeline_config(c); !problems.empty()) throw Error(problems.front());
      log(1, "generating into " + c.output_dir + " (config " + config_hash(c) + ")");
      std::size_t last = 0;
      GenerateSummary s = generate(c, [&](std::string_view split, std::size_t done, std::size_t total) {
        if (verbosity >= 2 || done == total || done >= last + 1000) {
          log(1, std::string(split) + ": " + std::to_string(done) + "/" + std::to_string(total));
          last = done == total ? 0 : done;
        }
      });
      for (const auto& [split, info] : s.manifest["splits"].items())
        log(1, split + ": " + std::to_string(info["records"].get<std::size_t>()) + " records, " +
                   std::to_string(info["questions"].get<std::size_t>()) + " questions, " +
                   std::to_string(info["rejected_scenes"].get<std::size_t>()) + " scenes rejected");
      if (!gen_verify) return 0;
      const nlohmann::json report = report_json(verify(read_dataset(c.output_dir), c, &s.manifest));
      std::cout << report.dump(2) << '\n';
      return report["passed"].get<bool>() ? 0 : 1;
    }

    if (*conf) {
      std::cout << config_to_json(cfg.load()).dump(2) << '\n';
      return 0;
    }

    if (*st) {
      std::cout << stats(read_dataset(stats_path)).dump(2) << '\n';
      return 0;
    }

    if (*ver) {
      const PipelineConfig c = cfg.load();
      std::optional<nlohmann::json> manifest;
      std::string mp = manifest_path;
      if (mp.empty() && std::filesystem::is_directory(verify_path)) {
        const auto guess = std::filesystem::path(verify_path) / "manifest.json";
        if (std::filesystem::exists(guess)) mp = guess.string();
      }
      if (!mp.empty()) manifest = nlohmann::json::parse(read_text(mp));
      const auto records = read_dataset(verify_path);
      log(1, "verifying " + std::to_string(records.size()) + " records");
      const nlohmann::json report = report_json(verify(records, c, manifest ? &*manifest : nullptr));
      std::cout << report.dump(2) << '\n';
      return report["passed"].get<bool>() ? 0 : 1;
    }

    if (*sol) {
      const PipelineConfig c = cfg.load();
      const std::string text = story_file.empty() ? story_text : read_text(story_file);
      if (text.empty()) throw Error("no story given (--story or --story-file)");
      const AnswerSet a = solve(text, question, config_grammar(c), c.realizer.touching_implies_near);
      std::string labels;
      for (const auto& l : a.labels) labels += (labels.empty() ? "" : ", ") + l;
      std::cout << labels << '\n';
      if (why)
        for (const Justification& j : a.justification)
          std::cout << "  " << to_string(j.fact) << " (depth " << j.depth << ")\n";
      return 0;
    }

    if (*per) {
      const PipelineConfig c = cfg.load();
      std::vector<DatasetRecord> records = read_dataset(perturb_in);
      for (DatasetRecord& r : records) r = make_unseen(r, config_vocabulary(c), fraction, c.seed);
      write_lines(records, perturb_out);
      log(1, "rewrote " + std::to_string(records.size()) + " records");
      return 0;
    }

    if (*imp) {
      const PipelineConfig c = cfg.load();
      const Scene scene = import_scene_file(scene_path);
      write_lines({record_from_scene(c, scene, import_questions)}, import_out);
      return 0;
    }
  } catch (const std::exception& e) {
    log(0, e.what());
    return 2;
  }
  return 0;
}
