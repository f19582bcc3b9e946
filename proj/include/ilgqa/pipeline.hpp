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

#ifndef ILGQA_PIPELINE_HPP_
#define ILGQA_PIPELINE_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ilgqa/corpus.hpp"
#include "ilgqa/curriculum.hpp"
#include "ilgqa/extraction.hpp"
#include "ilgqa/layout_graph.hpp"
#include "ilgqa/qa.hpp"

namespace ilgqa {

// Everything `run` needs, resolved from flags/config file by the CLI.
struct PipelineConfig {
  std::filesystem::path input;
  std::string input_format = "canonical";  // "canonical" | "simmc"
  Domain domain = Domain::kFashion;
  std::optional<std::filesystem::path> lexicon_override;
  int adjacency_window = 2;
  bool longest_path_only = false;
  CurriculumConfig curriculum;
  std::filesystem::path output_dir;
};

// Range checks every field; called before any file is touched.
void validate_config(const PipelineConfig& config);

Lexicon resolve_lexicon(const PipelineConfig& config);
Corpus load_corpus(const PipelineConfig& config);

struct GraphBuildResult {
  // One graph per corpus scene, including scenes no dialogue mentions.
  std::map<std::string, LayoutGraph> graphs;
  ExtractionStats stats;
  std::vector<std::string> merge_warnings;
};

// Walks every dialogue turn in order, extracts and aligns mentions from
// both utterance fields, and merges the resulting sub-graphs into the
// turn's scene graph.
GraphBuildResult build_graphs(const Corpus& corpus, const Matchers& matchers,
                              const AlignOptions& align_options = {});

// One <scene_id>.json per graph (scene ids sanitized for the filesystem;
// colliding sanitized names are an input error).
void write_graphs(const std::map<std::string, LayoutGraph>& graphs,
                  const std::filesystem::path& dir);
std::map<std::string, LayoutGraph> read_graphs(
    const std::filesystem::path& dir);

// Aggregate counters for stats.json / the `stats` subcommand.
struct RunStats {
  long dialogues = 0;
  long turns = 0;
  long scenes = 0;
  long assets = 0;
  ExtractionStats extraction;
  long merge_warnings = 0;
  long graphs = 0;
  long nodes = 0;
  long edges = 0;
  long qa_pairs = 0;
  std::map<std::string, long> per_task;  // keyed by task type name
  long skipped_no_bbox = 0;
  long deduplicated = 0;
  int max_spanned = 0;
  // Bin k counts difficulties in (k/10, (k+1)/10]; the last edge is 1.0.
  std::array<long, 10> difficulty_histogram{};
  std::vector<long> per_window_eligible;
};

void write_stats(const RunStats& stats, const std::filesystem::path& path);
RunStats read_stats(const std::filesystem::path& path);
std::string format_stats(const RunStats& stats);

// The full pipeline: ingest, build graphs, generate QA pairs, schedule.
// Writes graphs/, qa_pairs.jsonl, curriculum/, schedule.json and
// stats.json under config.output_dir, replacing artifacts from previous
// runs. On failure the partially written artifacts are removed. A corpus
// that yields zero pairs still succeeds, with empty outputs.
RunStats run(const PipelineConfig& config);

}  // namespace ilgqa

#endif  // ILGQA_PIPELINE_HPP_
