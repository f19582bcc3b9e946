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

#include "ilgqa/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include <json.hpp>

#include "ilgqa/errors.hpp"

namespace ilgqa {

namespace {

using nlohmann::ordered_json;

void validate(const CurriculumConfig& cfg) {
  if (!(cfg.alpha > 0.0)) {
    throw InputError("curriculum: alpha must be positive");
  }
  if (cfg.beta < 0.0) {
    throw InputError("curriculum: beta must be non-negative");
  }
  if (cfg.total_steps < 1) {
    throw InputError("curriculum: total_steps must be positive");
  }
  if (cfg.windows < 1) {
    throw InputError("curriculum: windows must be positive");
  }
  if (static_cast<long>(cfg.windows) > cfg.total_steps) {
    throw InputError("curriculum: more windows than steps");
  }
  if (cfg.shard_size < 0) {
    throw InputError("curriculum: shard_size must be non-negative");
  }
}

}  // namespace

double CurriculumConfig::gamma() const { return std::sqrt(1.0 / alpha); }

double competence_unclamped(long t, const CurriculumConfig& cfg) {
  const double progress =
      static_cast<double>(t) / static_cast<double>(cfg.total_steps);
  const double md = cfg.min_difficulty;
  return cfg.gamma() *
         std::sqrt(cfg.alpha * progress +
                   cfg.beta * (1.0 - progress) * md * md);
}

double competence(long t, const CurriculumConfig& cfg) {
  validate(cfg);
  if (t < 0 || t > cfg.total_steps) {
    throw InputError("curriculum: step " + std::to_string(t) +
                     " outside [0, " + std::to_string(cfg.total_steps) + "]");
  }
  return std::clamp(competence_unclamped(t, cfg), cfg.min_difficulty, 1.0);
}

std::vector<std::size_t> eligible_indices(const std::vector<QAPair>& pairs,
                                          double c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].difficulty <= c) out.push_back(i);
  }
  return out;
}

std::vector<QAPair> eligible(const std::vector<QAPair>& pairs, double c) {
  std::vector<QAPair> out;
  for (std::size_t i : eligible_indices(pairs, c)) out.push_back(pairs[i]);
  return out;
}

CurriculumSchedule build_schedule(const std::vector<QAPair>& pairs,
                                  CurriculumConfig cfg) {
  if (pairs.empty()) {
    throw InputError("curriculum: empty pair set");
  }
  double min_d = 1.0;
  for (const auto& p : pairs) min_d = std::min(min_d, p.difficulty);
  cfg.min_difficulty = min_d;
  validate(cfg);

  CurriculumSchedule schedule;
  schedule.config = cfg;

  schedule.by_difficulty.resize(pairs.size());
  std::iota(schedule.by_difficulty.begin(), schedule.by_difficulty.end(), 0);
  std::stable_sort(schedule.by_difficulty.begin(),
                   schedule.by_difficulty.end(),
                   [&](std::size_t a, std::size_t b) {
                     return pairs[a].difficulty < pairs[b].difficulty;
                   });

  const long base = cfg.total_steps / cfg.windows;
  for (int w = 0; w < cfg.windows; ++w) {
    WindowPlan plan;
    plan.index = w;
    plan.start_step = static_cast<long>(w) * base;
    // The terminal window evaluates c at T, guaranteeing full coverage.
    const long t = (w == cfg.windows - 1) ? cfg.total_steps : plan.start_step;
    plan.competence = competence(t, cfg);
    auto past = std::partition_point(
        schedule.by_difficulty.begin(), schedule.by_difficulty.end(),
        [&](std::size_t i) {
          return pairs[i].difficulty <= plan.competence;
        });
    plan.eligible_count =
        static_cast<long>(past - schedule.by_difficulty.begin());
    schedule.windows.push_back(plan);
  }
  return schedule;
}

void write_schedule(const CurriculumSchedule& schedule,
                    const std::vector<QAPair>& pairs,
                    const std::filesystem::path& shard_dir,
                    const std::filesystem::path& sidecar_path) {
  const CurriculumConfig& cfg = schedule.config;
  std::filesystem::create_directories(shard_dir);

  std::mt19937_64 rng(cfg.seed);
  for (const WindowPlan& plan : schedule.windows) {
    // In-order view of the window's eligible prefix.
    std::vector<std::size_t> members(
        schedule.by_difficulty.begin(),
        schedule.by_difficulty.begin() + plan.eligible_count);
    std::sort(members.begin(), members.end());

    std::vector<std::size_t> draw;
    if (cfg.shard_size == 0) {
      draw = members;
    } else {
      draw.reserve(cfg.shard_size);
      for (long i = 0; i < cfg.shard_size; ++i) {
        // Modulo draw keeps shards identical across standard libraries;
        // the bias is irrelevant at these set sizes.
        draw.push_back(members[rng() % members.size()]);
      }
    }

    const std::filesystem::path shard =
        shard_dir / ("window_" + std::to_string(plan.index) + ".jsonl");
    std::ofstream out(shard);
    if (!out) {
      throw InputError("cannot write '" + shard.string() + "'");
    }
    for (std::size_t i : draw) {
      const QAPair& p = pairs[i];
      ordered_json rec;
      rec["task_type"] = to_string(p.task_type);
      rec["question"] = p.question;
      rec["answer"] = p.answer;
      rec["scene_id"] = p.scene_id;
      rec["image_path"] = p.image_path;
      rec["asset_id"] = p.asset_id;
      rec["raw_span_count"] = p.raw_span_count;
      rec["difficulty"] = p.difficulty;
      rec["window"] = plan.index;
      rec["competence"] = plan.competence;
      out << rec.dump() << "\n";
    }
  }

  ordered_json sidecar;
  sidecar["alpha"] = cfg.alpha;
  sidecar["beta"] = cfg.beta;
  sidecar["gamma"] = cfg.gamma();
  sidecar["total_steps"] = cfg.total_steps;
  sidecar["windows"] = cfg.windows;
  sidecar["min_difficulty"] = cfg.min_difficulty;
  sidecar["seed"] = cfg.seed;
  sidecar["shard_size"] = cfg.shard_size;
  sidecar["per_window"] = ordered_json::array();
  for (const WindowPlan& plan : schedule.windows) {
    ordered_json w;
    w["window"] = plan.index;
    w["start_step"] = plan.start_step;
    w["competence"] = plan.competence;
    w["eligible_count"] = plan.eligible_count;
    sidecar["per_window"].push_back(w);
  }
  std::ofstream out(sidecar_path);
  if (!out) {
    throw InputError("cannot write '" + sidecar_path.string() + "'");
  }
  out << sidecar.dump(2) << "\n";
}

}  // namespace ilgqa
