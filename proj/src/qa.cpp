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

#include "ilgqa/qa.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include <json.hpp>

#include "ilgqa/errors.hpp"

namespace ilgqa {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string replace_all(std::string text, const std::string& slot,
                        const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(slot, pos)) != std::string::npos) {
    text.replace(pos, slot.size(), value);
    pos += value.size();
  }
  return text;
}

struct SlotBinding {
  std::string attr_type;
  std::string attr_value;
  std::string asset_id;
  std::string region;
  std::string position;
  std::string color;
  std::string type;
};

std::string fill(const std::string& tmpl, const SlotBinding& slots) {
  std::string q = tmpl;
  q = replace_all(std::move(q), "{attr_type}", slots.attr_type);
  q = replace_all(std::move(q), "{asset_id}", slots.asset_id);
  q = replace_all(std::move(q), "{region}", slots.region);
  q = replace_all(std::move(q), "{position}", slots.position);
  q = replace_all(std::move(q), "{color}", slots.color);
  q = replace_all(std::move(q), "{type}", slots.type);
  return q;
}

}  // namespace

std::string to_string(QATaskType type) {
  switch (type) {
    case QATaskType::kPVQA:
      return "PVQA";
    case QATaskType::kRVQA:
      return "RVQA";
    case QATaskType::kPoVQA:
      return "PoVQA";
    case QATaskType::kPSQA:
      return "PSQA";
    case QATaskType::kRSQA:
      return "RSQA";
    case QATaskType::kVSQA:
      return "VSQA";
  }
  throw InternalError("unknown task type");
}

QATaskType parse_task_type(const std::string& name) {
  for (QATaskType t : kAllTaskTypes) {
    if (to_string(t) == name) return t;
  }
  throw InputError("unknown QA task type '" + name + "'");
}

std::string render_region(const Rect& bbox) {
  return "[" + std::to_string(bbox.x1) + ", " + std::to_string(bbox.y1) +
         ", " + std::to_string(bbox.x2) + ", " + std::to_string(bbox.y2) +
         "]";
}

double annotate_difficulty(int raw_span_count, int max_spanned) {
  if (max_spanned == 0) {
    throw InputError(
        "difficulty normalizer is zero: the corpus produced no QA pairs");
  }
  if (raw_span_count < 1 || raw_span_count > max_spanned) {
    throw InternalError("span count " + std::to_string(raw_span_count) +
                        " outside [1, " + std::to_string(max_spanned) + "]");
  }
  return static_cast<double>(raw_span_count) /
         static_cast<double>(max_spanned);
}

GenerationResult generate(const std::map<std::string, LayoutGraph>& graphs,
                          const Corpus& corpus,
                          const GenerateOptions& options) {
  GenerationResult result;
  for (QATaskType t : kAllTaskTypes) result.per_task[t] = 0;

  struct AssetWork {
    const std::string* scene_id;
    const AssetNode* asset;
    std::vector<SpatialPath> paths;
  };

  // First pass: walk everything and fix the normalizer D before any
  // difficulty is assigned.
  std::vector<AssetWork> work;
  for (const auto& [scene_id, graph] : graphs) {
    for (const auto& [key, node] : graph.nodes) {
      if (key.kind != NodeKind::kAsset) continue;  // skip background nodes
      AssetWork w;
      w.scene_id = &scene_id;
      w.asset = &std::get<AssetNode>(node);
      w.paths = walk(graph, key, options.walk);
      if (options.longest_path_only && !w.paths.empty()) {
        auto longest = std::max_element(
            w.paths.begin(), w.paths.end(),
            [](const SpatialPath& a, const SpatialPath& b) {
              return a.spanned_nodes < b.spanned_nodes;
            });
        w.paths = {*longest};
      }
      result.max_spanned = std::max(result.max_spanned, 1);
      for (const auto& p : w.paths) {
        result.max_spanned = std::max(result.max_spanned, p.spanned_nodes);
      }
      work.push_back(std::move(w));
    }
  }
  if (work.empty()) return result;  // nothing to generate, D stays 0

  const int d_norm = result.max_spanned;
  std::set<std::tuple<QATaskType, std::string, std::string, std::string>>
      seen;
  const std::array<std::pair<std::string, const std::string AssetNode::*>, 2>
      attributes = {{{"color", &AssetNode::color},
                     {"type", &AssetNode::asset_type}}};

  auto emit = [&](QAPair pair) {
    auto key = std::make_tuple(pair.task_type, pair.question, pair.answer,
                               pair.scene_id);
    if (!seen.insert(key).second) {
      ++result.deduplicated;
      return;
    }
    ++result.per_task[pair.task_type];
    result.pairs.push_back(std::move(pair));
  };

  for (const AssetWork& w : work) {
    auto scene_it = corpus.scenes.find(*w.scene_id);
    if (scene_it == corpus.scenes.end()) {
      throw InternalError("graph scene '" + *w.scene_id +
                          "' is not in the corpus");
    }
    const std::string& image_path = scene_it->second.image_path;
    const AssetNode& asset = *w.asset;

    SlotBinding slots;
    slots.asset_id = asset.asset_id;
    slots.color = asset.color;
    slots.type = asset.asset_type;
    if (asset.bbox) slots.region = render_region(*asset.bbox);

    auto base_pair = [&](QATaskType type) {
      QAPair p;
      p.task_type = type;
      p.scene_id = *w.scene_id;
      p.image_path = image_path;
      p.asset_id = asset.asset_id;
      return p;
    };

    for (QATaskType type : kAllTaskTypes) {
      switch (type) {
        case QATaskType::kPVQA:
          for (const auto& [attr_name, attr_field] : attributes) {
            slots.attr_type = attr_name;
            QAPair p = base_pair(type);
            p.question = fill(options.templates.pvqa, slots);
            p.answer = asset.*attr_field;
            p.raw_span_count = 1;
            p.difficulty = annotate_difficulty(1, d_norm);
            emit(std::move(p));
          }
          break;
        case QATaskType::kRVQA:
          if (!asset.bbox) {
            ++result.skipped_no_bbox;
            break;
          }
          for (const auto& [attr_name, attr_field] : attributes) {
            slots.attr_type = attr_name;
            QAPair p = base_pair(type);
            p.question = fill(options.templates.rvqa, slots);
            p.answer = asset.*attr_field;
            p.raw_span_count = 1;
            p.difficulty = annotate_difficulty(1, d_norm);
            emit(std::move(p));
          }
          break;
        case QATaskType::kPoVQA:
          for (const auto& [attr_name, attr_field] : attributes) {
            slots.attr_type = attr_name;
            for (const SpatialPath& path : w.paths) {
              slots.position = path.surface_text;
              QAPair p = base_pair(type);
              p.question = fill(options.templates.povqa, slots);
              p.answer = asset.*attr_field;
              p.raw_span_count = path.spanned_nodes;
              p.difficulty =
                  annotate_difficulty(path.spanned_nodes, d_norm);
              p.steps = path.steps;
              emit(std::move(p));
            }
          }
          break;
        case QATaskType::kPSQA:
          for (const SpatialPath& path : w.paths) {
            QAPair p = base_pair(type);
            p.question = fill(options.templates.psqa, slots);
            p.answer = path.surface_text;
            p.raw_span_count = path.spanned_nodes;
            p.difficulty = annotate_difficulty(path.spanned_nodes, d_norm);
            p.steps = path.steps;
            emit(std::move(p));
          }
          break;
        case QATaskType::kRSQA:
          if (!asset.bbox) {
            ++result.skipped_no_bbox;
            break;
          }
          for (const SpatialPath& path : w.paths) {
            QAPair p = base_pair(type);
            p.question = fill(options.templates.rsqa, slots);
            p.answer = path.surface_text;
            p.raw_span_count = path.spanned_nodes;
            p.difficulty = annotate_difficulty(path.spanned_nodes, d_norm);
            p.steps = path.steps;
            emit(std::move(p));
          }
          break;
        case QATaskType::kVSQA:
          for (const SpatialPath& path : w.paths) {
            QAPair p = base_pair(type);
            p.question = fill(options.templates.vsqa, slots);
            p.answer = path.surface_text;
            p.raw_span_count = path.spanned_nodes;
            p.difficulty = annotate_difficulty(path.spanned_nodes, d_norm);
            p.steps = path.steps;
            emit(std::move(p));
          }
          break;
      }
    }
  }

  return result;
}

void write_qa_pairs(const std::vector<QAPair>& pairs,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  for (const auto& p : pairs) {
    ordered_json rec;
    rec["task_type"] = to_string(p.task_type);
    rec["question"] = p.question;
    rec["answer"] = p.answer;
    rec["scene_id"] = p.scene_id;
    rec["image_path"] = p.image_path;
    rec["asset_id"] = p.asset_id;
    rec["raw_span_count"] = p.raw_span_count;
    rec["difficulty"] = p.difficulty;
    out << rec.dump() << "\n";
  }
}

std::vector<QAPair> read_qa_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("missing file '" + path.string() + "'");
  }
  std::vector<QAPair> pairs;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path.string(), line_no, "<record>", e.what());
    }
    QAPair p;
    try {
      p.task_type = parse_task_type(rec.at("task_type").get<std::string>());
      p.question = rec.at("question").get<std::string>();
      p.answer = rec.at("answer").get<std::string>();
      p.scene_id = rec.at("scene_id").get<std::string>();
      p.image_path = rec.at("image_path").get<std::string>();
      p.asset_id = rec.at("asset_id").get<std::string>();
      p.raw_span_count = rec.at("raw_span_count").get<int>();
      p.difficulty = rec.at("difficulty").get<double>();
    } catch (const json::exception& e) {
      throw ParseError(path.string(), line_no, "<record>", e.what());
    }
    if (p.raw_span_count < 1) {
      throw ParseError(path.string(), line_no, "raw_span_count",
                       "must be a positive integer");
    }
    if (!(p.difficulty > 0.0) || p.difficulty > 1.0) {
      throw ParseError(path.string(), line_no, "difficulty",
                       "must lie in (0, 1]");
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace ilgqa
