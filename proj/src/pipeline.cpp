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

#include "ilgqa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ilgqa/errors.hpp"

namespace ilgqa {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Artifact names `run` owns inside the output directory. Cleanup and
// overwrite logic touches exactly these, never user files.
const char* const kGraphsDir = "graphs";
const char* const kQAPairsFile = "qa_pairs.jsonl";
const char* const kCurriculumDir = "curriculum";
const char* const kScheduleFile = "schedule.json";
const char* const kStatsFile = "stats.json";

void remove_artifacts(const std::filesystem::path& out) {
  std::error_code ec;  // best-effort; cleanup must not mask the real error
  std::filesystem::remove_all(out / kGraphsDir, ec);
  std::filesystem::remove(out / kQAPairsFile, ec);
  std::filesystem::remove_all(out / kCurriculumDir, ec);
  std::filesystem::remove(out / kScheduleFile, ec);
  std::filesystem::remove(out / kStatsFile, ec);
}

std::string sanitize_filename(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '_' ||
                      c == '-';
    out.push_back(safe ? c : '_');
  }
  if (out.empty()) out = "_";
  return out;
}

}  // namespace

void validate_config(const PipelineConfig& config) {
  if (config.input.empty()) {
    throw InputError("config: input path is required");
  }
  if (config.input_format != "canonical" && config.input_format != "simmc") {
    throw InputError("config: input format must be 'canonical' or 'simmc', "
                     "got '" +
                     config.input_format + "'");
  }
  if (config.adjacency_window < 0) {
    throw InputError("config: adjacency window must be non-negative");
  }
  if (config.output_dir.empty()) {
    throw InputError("config: output directory is required");
  }
  const CurriculumConfig& c = config.curriculum;
  if (!(c.alpha > 0.0)) {
    throw InputError("config: curriculum alpha must be positive");
  }
  if (c.beta < 0.0) {
    throw InputError("config: curriculum beta must be non-negative");
  }
  if (c.total_steps < 1) {
    throw InputError("config: curriculum total_steps must be positive");
  }
  if (c.windows < 1) {
    throw InputError("config: curriculum windows must be positive");
  }
  if (static_cast<long>(c.windows) > c.total_steps) {
    throw InputError("config: curriculum windows exceed total_steps");
  }
  if (c.shard_size < 0) {
    throw InputError("config: curriculum shard_size must be non-negative");
  }
}

Lexicon resolve_lexicon(const PipelineConfig& config) {
  Lexicon lexicon = default_lexicon(config.domain);
  if (config.lexicon_override) {
    lexicon = load_lexicon_override(*config.lexicon_override, lexicon);
  }
  return lexicon;
}

Corpus load_corpus(const PipelineConfig& config) {
  const Lexicon lexicon = resolve_lexicon(config);
  if (config.input_format == "simmc") {
    return ingest_simmc(config.input, config.domain, lexicon);
  }
  return ingest_canonical(config.input, config.domain, lexicon);
}

GraphBuildResult build_graphs(const Corpus& corpus, const Matchers& matchers,
                              const AlignOptions& align_options) {
  GraphBuildResult result;
  for (const auto& [scene_id, scene] : corpus.scenes) {
    LayoutGraph g;
    g.scene_id = scene_id;
    result.graphs.emplace(scene_id, std::move(g));
  }

  AlignOptions opts = align_options;
  for (const Dialogue& dialogue : corpus.dialogues) {
    for (const Turn& turn : dialogue.turns) {
      auto graph_it = result.graphs.find(turn.scene_id);
      if (graph_it == result.graphs.end()) {
        throw InternalError("turn references unknown scene '" +
                            turn.scene_id + "' after validation");
      }
      const std::pair<UtteranceField, const std::string*> fields[] = {
          {UtteranceField::kUser, &turn.user_utterance},
          {UtteranceField::kSystem, &turn.system_response},
      };
      for (const auto& [field, raw] : fields) {
        MentionSource source{dialogue.dialogue_id, turn.index, field};
        UtteranceExtraction ex =
            extract_utterance(*raw, source, matchers, &result.stats);
        std::vector<AlignedMention> aligned =
            align(ex.mentions, ex.chains, corpus, turn.scene_id, opts,
                  &result.stats);
        for (const AlignedMention& mention : aligned) {
          merge_into(graph_it->second, subgraph_from_mention(mention),
                     &result.merge_warnings);
        }
      }
    }
  }
  return result;
}

void write_graphs(const std::map<std::string, LayoutGraph>& graphs,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::map<std::string, std::string> used;  // filename -> scene_id
  for (const auto& [scene_id, graph] : graphs) {
    const std::string name = sanitize_filename(scene_id) + ".json";
    auto [it, inserted] = used.emplace(name, scene_id);
    if (!inserted) {
      throw InputError("scene ids '" + it->second + "' and '" + scene_id +
                       "' collide in graph file name '" + name + "'");
    }
    std::ofstream out(dir / name);
    if (!out) {
      throw InputError("cannot write '" + (dir / name).string() + "'");
    }
    out << serialize(graph);
  }
}

std::map<std::string, LayoutGraph> read_graphs(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw InputError("missing graph directory '" + dir.string() + "'");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, LayoutGraph> graphs;
  for (const auto& file : files) {
    std::ifstream in(file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    LayoutGraph g;
    try {
      g = deserialize(buffer.str());
    } catch (const Error& e) {
      throw InputError("graph file '" + file.string() + "': " + e.what());
    }
    const std::string scene_id = g.scene_id;
    if (!graphs.emplace(scene_id, std::move(g)).second) {
      throw InputError("duplicate graph for scene '" + scene_id + "'");
    }
  }
  return graphs;
}

void write_stats(const RunStats& stats, const std::filesystem::path& path) {
  ordered_json j;
  j["dialogues"] = stats.dialogues;
  j["turns"] = stats.turns;
  j["scenes"] = stats.scenes;
  j["assets"] = stats.assets;
  ordered_json ex;
  ex["va_mentions"] = stats.extraction.va_mentions;
  ex["sd_mentions"] = stats.extraction.sd_mentions;
  ex["chains_parsed"] = stats.extraction.chains_parsed;
  ex["chains_without_background"] =
      stats.extraction.chains_without_background;
  ex["aligned"] = stats.extraction.aligned;
  ex["ambiguous"] = stats.extraction.ambiguous;
  ex["unmatched"] = stats.extraction.unmatched;
  ex["chains_paired"] = stats.extraction.chains_paired;
  ex["chains_unpaired"] = stats.extraction.chains_unpaired;
  j["extraction"] = ex;
  j["merge_warnings"] = stats.merge_warnings;
  j["graphs"] = stats.graphs;
  j["nodes"] = stats.nodes;
  j["edges"] = stats.edges;
  j["qa_pairs"] = stats.qa_pairs;
  j["per_task"] = ordered_json::object();
  for (const auto& [name, count] : stats.per_task) {
    j["per_task"][name] = count;
  }
  j["skipped_no_bbox"] = stats.skipped_no_bbox;
  j["deduplicated"] = stats.deduplicated;
  j["max_spanned"] = stats.max_spanned;
  ordered_json hist;
  hist["bin_edges"] = ordered_json::array();
  for (int i = 0; i <= 10; ++i) {
    hist["bin_edges"].push_back(static_cast<double>(i) / 10.0);
  }
  hist["counts"] = stats.difficulty_histogram;
  j["difficulty_histogram"] = hist;
  j["per_window_eligible"] = stats.per_window_eligible;

  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  out << j.dump(2) << "\n";
}

RunStats read_stats(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("missing stats file '" + path.string() +
                     "' (run the pipeline first)");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, "<document>", e.what());
  }
  RunStats s;
  try {
    s.dialogues = j.at("dialogues").get<long>();
    s.turns = j.at("turns").get<long>();
    s.scenes = j.at("scenes").get<long>();
    s.assets = j.at("assets").get<long>();
    const json& ex = j.at("extraction");
    s.extraction.va_mentions = ex.at("va_mentions").get<long>();
    s.extraction.sd_mentions = ex.at("sd_mentions").get<long>();
    s.extraction.chains_parsed = ex.at("chains_parsed").get<long>();
    s.extraction.chains_without_background =
        ex.at("chains_without_background").get<long>();
    s.extraction.aligned = ex.at("aligned").get<long>();
    s.extraction.ambiguous = ex.at("ambiguous").get<long>();
    s.extraction.unmatched = ex.at("unmatched").get<long>();
    s.extraction.chains_paired = ex.at("chains_paired").get<long>();
    s.extraction.chains_unpaired = ex.at("chains_unpaired").get<long>();
    s.merge_warnings = j.at("merge_warnings").get<long>();
    s.graphs = j.at("graphs").get<long>();
    s.nodes = j.at("nodes").get<long>();
    s.edges = j.at("edges").get<long>();
    s.qa_pairs = j.at("qa_pairs").get<long>();
    for (const auto& [name, count] : j.at("per_task").items()) {
      s.per_task[name] = count.get<long>();
    }
    s.skipped_no_bbox = j.at("skipped_no_bbox").get<long>();
    s.deduplicated = j.at("deduplicated").get<long>();
    s.max_spanned = j.at("max_spanned").get<int>();
    const json& counts = j.at("difficulty_histogram").at("counts");
    if (counts.size() != s.difficulty_histogram.size()) {
      throw InputError("stats file: difficulty histogram must have 10 bins");
    }
    for (std::size_t i = 0; i < s.difficulty_histogram.size(); ++i) {
      s.difficulty_histogram[i] = counts[i].get<long>();
    }
    s.per_window_eligible =
        j.at("per_window_eligible").get<std::vector<long>>();
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 0, "<document>", e.what());
  }
  return s;
}

std::string format_stats(const RunStats& s) {
  std::ostringstream out;
  out << "corpus:     " << s.dialogues << " dialogues, " << s.turns
      << " turns, " << s.scenes << " scenes, " << s.assets << " assets\n";
  out << "extraction: " << s.extraction.va_mentions
      << " visual-attribute mentions, " << s.extraction.sd_mentions
      << " spatial descriptions, " << s.extraction.chains_parsed
      << " chains (" << s.extraction.chains_without_background
      << " without background item)\n";
  out << "alignment:  " << s.extraction.aligned << " aligned, "
      << s.extraction.ambiguous << " ambiguous, " << s.extraction.unmatched
      << " unmatched; chains " << s.extraction.chains_paired << " paired / "
      << s.extraction.chains_unpaired << " unpaired\n";
  out << "graphs:     " << s.graphs << " graphs, " << s.nodes << " nodes, "
      << s.edges << " edges, " << s.merge_warnings << " merge warnings\n";
  out << "qa pairs:   " << s.qa_pairs << " total";
  if (s.deduplicated > 0) out << " (" << s.deduplicated << " deduplicated)";
  if (s.skipped_no_bbox > 0) {
    out << ", " << s.skipped_no_bbox << " region templates skipped (no "
        << "bounding box)";
  }
  out << "\n";
  for (const auto& [name, count] : s.per_task) {
    out << "  " << name << ": " << count << "\n";
  }
  out << "difficulty: normalizer " << s.max_spanned << "; histogram";
  for (std::size_t i = 0; i < s.difficulty_histogram.size(); ++i) {
    out << " (" << static_cast<double>(i) / 10.0 << ", "
        << static_cast<double>(i + 1) / 10.0
        << "]=" << s.difficulty_histogram[i];
  }
  out << "\n";
  out << "curriculum: ";
  if (s.per_window_eligible.empty()) {
    out << "no windows\n";
  } else {
    out << s.per_window_eligible.size() << " windows, eligible counts";
    for (long c : s.per_window_eligible) out << " " << c;
    out << "\n";
  }
  return out.str();
}

RunStats run(const PipelineConfig& config) {
  validate_config(config);

  const Lexicon lexicon = resolve_lexicon(config);
  const Matchers matchers = Matchers::compile(lexicon);
  const Corpus corpus = load_corpus(config);

  const std::filesystem::path& out = config.output_dir;
  std::filesystem::create_directories(out);
  remove_artifacts(out);

  try {
    RunStats stats;
    stats.dialogues = static_cast<long>(corpus.dialogues.size());
    for (const auto& d : corpus.dialogues) {
      stats.turns += static_cast<long>(d.turns.size());
    }
    stats.scenes = static_cast<long>(corpus.scenes.size());
    stats.assets = static_cast<long>(corpus.assets.size());

    AlignOptions align_options;
    align_options.adjacency_window = config.adjacency_window;
    GraphBuildResult built = build_graphs(corpus, matchers, align_options);
    stats.extraction = built.stats;
    stats.merge_warnings = static_cast<long>(built.merge_warnings.size());
    stats.graphs = static_cast<long>(built.graphs.size());
    for (const auto& [scene_id, graph] : built.graphs) {
      stats.nodes += static_cast<long>(graph.nodes.size());
      stats.edges += static_cast<long>(graph.edges.size());
    }
    write_graphs(built.graphs, out / kGraphsDir);

    GenerateOptions gen_options;
    gen_options.longest_path_only = config.longest_path_only;
    GenerationResult generated = generate(built.graphs, corpus, gen_options);
    stats.qa_pairs = static_cast<long>(generated.pairs.size());
    for (const auto& [type, count] : generated.per_task) {
      stats.per_task[to_string(type)] = count;
    }
    stats.skipped_no_bbox = generated.skipped_no_bbox;
    stats.deduplicated = generated.deduplicated;
    stats.max_spanned = generated.max_spanned;
    for (const QAPair& p : generated.pairs) {
      // d in (0, 1]; bin k covers (k/10, (k+1)/10].
      int bin = static_cast<int>(std::ceil(p.difficulty * 10.0)) - 1;
      bin = std::clamp(bin, 0, 9);
      ++stats.difficulty_histogram[static_cast<std::size_t>(bin)];
    }
    write_qa_pairs(generated.pairs, out / kQAPairsFile);

    std::filesystem::create_directories(out / kCurriculumDir);
    if (generated.pairs.empty()) {
      // Nothing to schedule; emit an empty sidecar so `stats` still works.
      ordered_json sidecar;
      sidecar["alpha"] = config.curriculum.alpha;
      sidecar["beta"] = config.curriculum.beta;
      sidecar["gamma"] = config.curriculum.gamma();
      sidecar["total_steps"] = config.curriculum.total_steps;
      sidecar["windows"] = config.curriculum.windows;
      sidecar["min_difficulty"] = 0.0;
      sidecar["seed"] = config.curriculum.seed;
      sidecar["shard_size"] = config.curriculum.shard_size;
      sidecar["per_window"] = ordered_json::array();
      std::ofstream sidecar_out(out / kScheduleFile);
      if (!sidecar_out) {
        throw InputError("cannot write '" +
                         (out / kScheduleFile).string() + "'");
      }
      sidecar_out << sidecar.dump(2) << "\n";
    } else {
      CurriculumSchedule schedule =
          build_schedule(generated.pairs, config.curriculum);
      write_schedule(schedule, generated.pairs, out / kCurriculumDir,
                     out / kScheduleFile);
      for (const WindowPlan& w : schedule.windows) {
        stats.per_window_eligible.push_back(w.eligible_count);
      }
    }

    write_stats(stats, out / kStatsFile);
    return stats;
  } catch (...) {
    remove_artifacts(out);
    throw;
  }
}

}  // namespace ilgqa
