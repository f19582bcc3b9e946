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

#ifndef ILGQA_QA_HPP_
#define ILGQA_QA_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ilgqa/corpus.hpp"
#include "ilgqa/layout_graph.hpp"

namespace ilgqa {

// The six question/answer task families. Enum order is emission order.
enum class QATaskType {
  kPVQA,   // pure visual
  kRVQA,   // region-guided visual
  kPoVQA,  // position-guided visual
  kPSQA,   // pure spatial
  kRSQA,   // region-guided spatial
  kVSQA,   // visual-attribute-guided spatial
};

inline constexpr std::array<QATaskType, 6> kAllTaskTypes = {
    QATaskType::kPVQA, QATaskType::kRVQA, QATaskType::kPoVQA,
    QATaskType::kPSQA, QATaskType::kRSQA, QATaskType::kVSQA};

std::string to_string(QATaskType type);
QATaskType parse_task_type(const std::string& name);

// One generated pair. `steps` records the generating path (empty for the
// path-free visual tasks); it stays in memory and is not serialized.
struct QAPair {
  QATaskType task_type = QATaskType::kPVQA;
  std::string question;
  std::string answer;
  std::string scene_id;
  std::string image_path;
  std::string asset_id;
  int raw_span_count = 1;   // nodes spanned by the generating path
  double difficulty = 0.0;  // raw_span_count / D, in (0, 1]
  StepList steps;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

// Question templates with {attr_type}, {asset_id}, {region}, {position},
// {color} and {type} placeholders. Answers are the bare attribute value for
// visual tasks and the path surface text for spatial tasks.
struct QATemplates {
  std::string pvqa = "What is the {attr_type} of item {asset_id}?";
  std::string rvqa =
      "What is the {attr_type} of item {asset_id} in region? "
      "Region: {region}";
  std::string povqa = "What is the {attr_type} of item {asset_id} {position}?";
  std::string psqa = "Where is the item {asset_id}?";
  std::string rsqa = "Where is the item {asset_id} in region? Region: {region}";
  std::string vsqa = "Where is the {color} {type} {asset_id}?";
};

struct GenerateOptions {
  QATemplates templates;
  bool longest_path_only = false;
  WalkOptions walk;
};

struct GenerationResult {
  std::vector<QAPair> pairs;
  int max_spanned = 0;  // the difficulty normalizer D
  std::map<QATaskType, long> per_task;
  long skipped_no_bbox = 0;  // region templates on assets without a box
  long deduplicated = 0;
};

// "[x1, y1, x2, y2]", exactly as region slots are printed.
std::string render_region(const Rect& bbox);

// raw / max_spanned. Aborts generation when the corpus produced no spanned
// nodes at all.
double annotate_difficulty(int raw_span_count, int max_spanned);

// Walks every asset node of every graph and fills the six templates.
// Two passes: the first fixes the normalizer D over the whole run, the
// second emits pairs in (scene_id, asset_id, task_type, attribute, path
// rank) order. String-identical pairs keep their first occurrence.
GenerationResult generate(const std::map<std::string, LayoutGraph>& graphs,
                          const Corpus& corpus,
                          const GenerateOptions& options = {});

// qa_pairs.jsonl, one record per pair, stable field order.
void write_qa_pairs(const std::vector<QAPair>& pairs,
                    const std::filesystem::path& path);
std::vector<QAPair> read_qa_pairs(const std::filesystem::path& path);

}  // namespace ilgqa

#endif  // ILGQA_QA_HPP_
