// Copyright 2026 The ilgqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ilgqa/corpus.hpp"
#include "ilgqa/curriculum.hpp"
#include "ilgqa/errors.hpp"
#include "ilgqa/extraction.hpp"
#include "ilgqa/lexicon.hpp"
#include "ilgqa/pipeline.hpp"
#include "ilgqa/qa.hpp"

namespace {

using ilgqa::Domain;

struct CommonInput {
  std::string domain = "fashion";
  std::string lexicon_path;
};

void add_domain_options(CLI::App* cmd, CommonInput* common) {
  cmd->add_option("--domain", common->domain, "Corpus domain")
      ->check(CLI::IsMember({"fashion", "furniture"}))
      ->capture_default_str();
  cmd->add_option("--lexicon", common->lexicon_path,
                  "JSON lexicon override (per-slot value lists)")
      ->check(CLI::ExistingFile);
}

ilgqa::Lexicon resolve_lexicon(const CommonInput& common) {
  ilgqa::Lexicon lexicon =
      ilgqa::default_lexicon(ilgqa::parse_domain(common.domain));
  if (!common.lexicon_path.empty()) {
    lexicon = ilgqa::load_lexicon_override(common.lexicon_path, lexicon);
  }
  return lexicon;
}

ilgqa::Corpus load_canonical(const std::string& dir,
                             const CommonInput& common) {
  return ilgqa::ingest_canonical(dir, ilgqa::parse_domain(common.domain),
                                 resolve_lexicon(common));
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
}

// Merges a key=value file under the run subcommand's flags: a key is only
// applied when the matching flag was not given on the command line. CLI11's
// own config support only attaches to the top-level command (which would
// force `ilgqa --config f run`), so the merge is done by hand to keep the
// option on `run` where users expect it.
void apply_run_config(const CLI::App& run, const std::string& path,
                      std::string* input, std::string* domain,
                      std::string* lexicon, std::string* out,
                      ilgqa::PipelineConfig* cfg) {
  std::ifstream file(path);
  if (!file) {
    throw ilgqa::InputError("cannot read config '" + path + "'");
  }

  auto fail = [&path](int line_no,
                      const std::string& what) -> ilgqa::InputError {
    return ilgqa::InputError("config '" + path + "' line " +
                             std::to_string(line_no) + ": " + what);
  };
  auto to_long = [&fail](const std::string& v, int line_no) -> long {
    std::size_t pos = 0;
    long parsed = 0;
    try {
      parsed = std::stol(v, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != v.size() || v.empty()) throw fail(line_no, "expected integer");
    return parsed;
  };
  auto to_double = [&fail](const std::string& v, int line_no) -> double {
    std::size_t pos = 0;
    double parsed = 0;
    try {
      parsed = std::stod(v, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != v.size() || v.empty()) throw fail(line_no, "expected number");
    return parsed;
  };
  auto to_bool = [&fail](const std::string& v, int line_no) -> bool {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw fail(line_no, "expected true/false");
  };

  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw fail(line_no, "expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    static const std::set<std::string> known = {
        "input",      "format", "domain",      "lexicon",
        "adjacency-window",     "longest-path-only",
        "alpha",      "beta",   "total-steps", "windows",
        "seed",       "shard-size",            "out"};
    if (!known.count(key)) {
      throw fail(line_no, "unknown key '" + key + "'");
    }
    if (run.count("--" + key) > 0) continue;  // flags take precedence

    if (key == "input") {
      *input = value;
    } else if (key == "format") {
      if (value != "canonical" && value != "simmc") {
        throw fail(line_no, "format must be canonical or simmc");
      }
      cfg->input_format = value;
    } else if (key == "domain") {
      if (value != "fashion" && value != "furniture") {
        throw fail(line_no, "domain must be fashion or furniture");
      }
      *domain = value;
    } else if (key == "lexicon") {
      *lexicon = value;
    } else if (key == "adjacency-window") {
      cfg->adjacency_window = static_cast<int>(to_long(value, line_no));
    } else if (key == "longest-path-only") {
      cfg->longest_path_only = to_bool(value, line_no);
    } else if (key == "alpha") {
      cfg->curriculum.alpha = to_double(value, line_no);
    } else if (key == "beta") {
      cfg->curriculum.beta = to_double(value, line_no);
    } else if (key == "total-steps") {
      cfg->curriculum.total_steps = to_long(value, line_no);
    } else if (key == "windows") {
      cfg->curriculum.windows = static_cast<int>(to_long(value, line_no));
    } else if (key == "seed") {
      cfg->curriculum.seed =
          static_cast<std::uint64_t>(to_long(value, line_no));
    } else if (key == "shard-size") {
      cfg->curriculum.shard_size = to_long(value, line_no);
    } else {
      *out = value;  // "out"
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Builds layout graphs and curriculum-ordered QA datasets from "
      "situated multimodal dialogue corpora"};
  app.require_subcommand(1);

  // --- ingest ---------------------------------------------------------
  auto* ingest = app.add_subcommand(
      "ingest", "Read a corpus and write it in the canonical format");
  std::string ingest_input, ingest_format = "canonical", ingest_out;
  CommonInput ingest_common;
  ingest->add_option("--input", ingest_input, "Corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  ingest->add_option("--format", ingest_format, "Input format")
      ->check(CLI::IsMember({"canonical", "simmc"}))
      ->capture_default_str();
  add_domain_options(ingest, &ingest_common);
  ingest->add_option("--out", ingest_out, "Output directory")->required();

  // --- graph ----------------------------------------------------------
  auto* graph = app.add_subcommand(
      "graph", "Build one layout graph per scene from a canonical corpus");
  std::string graph_corpus, graph_out;
  CommonInput graph_common;
  int graph_window = 2;
  graph->add_option("--corpus", graph_corpus, "Canonical corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_domain_options(graph, &graph_common);
  graph
      ->add_option("--adjacency-window", graph_window,
                   "Max tokens between a visual attribute and its chain")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  graph->add_option("--out", graph_out, "Graph output directory")
      ->required();

  // --- gen-qa ---------------------------------------------------------
  auto* genqa = app.add_subcommand(
      "gen-qa", "Generate QA pairs from graphs and corpus metadata");
  std::string genqa_corpus, genqa_graphs, genqa_out;
  CommonInput genqa_common;
  bool genqa_longest = false;
  int genqa_max_steps = 6;
  genqa->add_option("--corpus", genqa_corpus, "Canonical corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  genqa->add_option("--graphs", genqa_graphs, "Graph directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_domain_options(genqa, &genqa_common);
  genqa->add_flag("--longest-path-only", genqa_longest,
                  "Keep only each asset's longest path");
  genqa
      ->add_option("--max-walk-steps", genqa_max_steps,
                   "Path enumeration bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  genqa->add_option("--out", genqa_out, "Output qa_pairs.jsonl path")
      ->required();

  // --- schedule -------------------------------------------------------
  auto* schedule = app.add_subcommand(
      "schedule", "Compute the competence schedule and emit shards");
  std::string schedule_pairs, schedule_out;
  ilgqa::CurriculumConfig schedule_cfg;
  schedule->add_option("--pairs", schedule_pairs, "qa_pairs.jsonl path")
      ->required()
      ->check(CLI::ExistingFile);
  schedule->add_option("--alpha", schedule_cfg.alpha, "Competence alpha")
      ->capture_default_str();
  schedule->add_option("--beta", schedule_cfg.beta, "Competence beta")
      ->capture_default_str();
  schedule
      ->add_option("--total-steps", schedule_cfg.total_steps,
                   "Training steps T")
      ->required();
  schedule->add_option("--windows", schedule_cfg.windows, "Shard windows")
      ->capture_default_str();
  schedule->add_option("--seed", schedule_cfg.seed, "Sampling seed")
      ->capture_default_str();
  schedule
      ->add_option("--shard-size", schedule_cfg.shard_size,
                   "Samples per window (0 = full eligible set)")
      ->capture_default_str();
  schedule->add_option("--out", schedule_out, "Output directory")
      ->required();

  // --- run ------------------------------------------------------------
  auto* run = app.add_subcommand(
      "run", "Full pipeline: ingest, graphs, QA pairs, curriculum");
  ilgqa::PipelineConfig run_cfg;
  std::string run_config;
  std::string run_input, run_lexicon, run_out, run_domain = "fashion";
  run->add_option("--config", run_config,
                  "Key=value config file; flags take precedence")
      ->check(CLI::ExistingFile);
  run->add_option("--input", run_input, "Corpus directory (required)");
  run->add_option("--format", run_cfg.input_format, "Input format")
      ->check(CLI::IsMember({"canonical", "simmc"}))
      ->capture_default_str();
  run->add_option("--domain", run_domain, "Corpus domain")
      ->check(CLI::IsMember({"fashion", "furniture"}))
      ->capture_default_str();
  run->add_option("--lexicon", run_lexicon, "JSON lexicon override");
  run->add_option("--adjacency-window", run_cfg.adjacency_window,
                  "Max tokens between a visual attribute and its chain")
      ->capture_default_str();
  run->add_flag("--longest-path-only", run_cfg.longest_path_only,
                "Keep only each asset's longest path");
  run->add_option("--alpha", run_cfg.curriculum.alpha, "Competence alpha")
      ->capture_default_str();
  run->add_option("--beta", run_cfg.curriculum.beta, "Competence beta")
      ->capture_default_str();
  run->add_option("--total-steps", run_cfg.curriculum.total_steps,
                  "Training steps T (required)");
  run->add_option("--windows", run_cfg.curriculum.windows, "Shard windows")
      ->capture_default_str();
  run->add_option("--seed", run_cfg.curriculum.seed, "Sampling seed")
      ->capture_default_str();
  run->add_option("--shard-size", run_cfg.curriculum.shard_size,
                  "Samples per window (0 = full eligible set)")
      ->capture_default_str();
  run->add_option("--out", run_out, "Output directory (required)");

  // --- stats ----------------------------------------------------------
  auto* stats = app.add_subcommand(
      "stats", "Report counts for an existing pipeline output directory");
  std::string stats_dir;
  stats->add_option("--dir", stats_dir, "Pipeline output directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  // --- tag-subset -----------------------------------------------------
  auto* tag = app.add_subcommand(
      "tag-subset",
      "Tag system responses as visual and/or spatial (JSONL report)");
  std::string tag_corpus, tag_out = "-";
  CommonInput tag_common;
  tag->add_option("--corpus", tag_corpus, "Canonical corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_domain_options(tag, &tag_common);
  tag->add_option("--out", tag_out, "Output file, '-' for stdout")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad usage is an input error
  }

  try {
    if (*ingest) {
      const Domain domain = ilgqa::parse_domain(ingest_common.domain);
      const ilgqa::Lexicon lexicon = resolve_lexicon(ingest_common);
      ilgqa::Corpus corpus =
          ingest_format == "simmc"
              ? ilgqa::ingest_simmc(ingest_input, domain, lexicon)
              : ilgqa::ingest_canonical(ingest_input, domain, lexicon);
      ilgqa::write_canonical(corpus, ingest_out);
      std::cout << "wrote canonical corpus (" << corpus.dialogues.size()
                << " dialogues, " << corpus.scenes.size() << " scenes, "
                << corpus.assets.size() << " assets) to " << ingest_out
                << "\n";
    } else if (*graph) {
      ilgqa::Corpus corpus = load_canonical(graph_corpus, graph_common);
      ilgqa::Matchers matchers =
          ilgqa::Matchers::compile(resolve_lexicon(graph_common));
      ilgqa::AlignOptions options;
      options.adjacency_window = graph_window;
      ilgqa::GraphBuildResult built =
          ilgqa::build_graphs(corpus, matchers, options);
      for (const std::string& warning : built.merge_warnings) {
        std::cerr << "warning: " << warning << "\n";
      }
      ilgqa::write_graphs(built.graphs, graph_out);
      std::cout << "wrote " << built.graphs.size() << " graphs to "
                << graph_out << "\n";
    } else if (*genqa) {
      ilgqa::Corpus corpus = load_canonical(genqa_corpus, genqa_common);
      std::map<std::string, ilgqa::LayoutGraph> graphs =
          ilgqa::read_graphs(genqa_graphs);
      ilgqa::GenerateOptions options;
      options.longest_path_only = genqa_longest;
      options.walk.max_steps = genqa_max_steps;
      ilgqa::GenerationResult result =
          ilgqa::generate(graphs, corpus, options);
      ilgqa::write_qa_pairs(result.pairs, genqa_out);
      std::cout << "wrote " << result.pairs.size() << " QA pairs to "
                << genqa_out << "\n";
    } else if (*schedule) {
      std::vector<ilgqa::QAPair> pairs = ilgqa::read_qa_pairs(schedule_pairs);
      ilgqa::CurriculumSchedule plan =
          ilgqa::build_schedule(pairs, schedule_cfg);
      const std::filesystem::path out_dir(schedule_out);
      ilgqa::write_schedule(plan, pairs, out_dir / "curriculum",
                            out_dir / "schedule.json");
      std::cout << "wrote " << plan.windows.size() << " windows to "
                << (out_dir / "curriculum").string() << "\n";
    } else if (*run) {
      const bool steps_given = run->count("--total-steps") > 0;
      if (!run_config.empty()) {
        apply_run_config(*run, run_config, &run_input, &run_domain,
                         &run_lexicon, &run_out, &run_cfg);
      }
      if (run_input.empty()) {
        throw ilgqa::InputError("run: --input is required (flag or config)");
      }
      if (run_out.empty()) {
        throw ilgqa::InputError("run: --out is required (flag or config)");
      }
      if (!steps_given && run_cfg.curriculum.total_steps == 0) {
        throw ilgqa::InputError(
            "run: --total-steps is required (flag or config)");
      }
      run_cfg.input = run_input;
      run_cfg.domain = ilgqa::parse_domain(run_domain);
      if (!run_lexicon.empty()) run_cfg.lexicon_override = run_lexicon;
      run_cfg.output_dir = run_out;
      ilgqa::RunStats run_stats = ilgqa::run(run_cfg);
      std::cout << ilgqa::format_stats(run_stats);
    } else if (*stats) {
      ilgqa::RunStats report =
          ilgqa::read_stats(std::filesystem::path(stats_dir) / "stats.json");
      std::cout << ilgqa::format_stats(report);
    } else if (*tag) {
      ilgqa::Corpus corpus = load_canonical(tag_corpus, tag_common);
      ilgqa::Matchers matchers =
          ilgqa::Matchers::compile(resolve_lexicon(tag_common));
      std::ofstream file;
      if (tag_out != "-") {
        file.open(tag_out);
        if (!file) {
          throw ilgqa::InputError("cannot write '" + tag_out + "'");
        }
      }
      std::ostream& out = tag_out == "-" ? std::cout : file;
      for (const auto& dialogue : corpus.dialogues) {
        for (const auto& turn : dialogue.turns) {
          auto flags = ilgqa::tag_subset(turn.system_response, matchers);
          nlohmann::ordered_json rec;
          rec["dialogue_id"] = dialogue.dialogue_id;
          rec["turn_index"] = turn.index;
          rec["flags"] = nlohmann::ordered_json::array();
          if (flags.count(ilgqa::SubsetFlag::kVisual)) {
            rec["flags"].push_back("visual");
          }
          if (flags.count(ilgqa::SubsetFlag::kSpatial)) {
            rec["flags"].push_back("spatial");
          }
          out << rec.dump() << "\n";
        }
      }
    }
  } catch (const ilgqa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ilgqa::Error::Kind::kInput ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
