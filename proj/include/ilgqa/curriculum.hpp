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

#ifndef ILGQA_CURRICULUM_HPP_
#define ILGQA_CURRICULUM_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ilgqa/qa.hpp"

namespace ilgqa {

// Competence schedule parameters. gamma is always sqrt(1/alpha) so that
// competence(T) lands on 1 exactly; it is derived, never configured.
struct CurriculumConfig {
  double alpha = 1.2;
  double beta = 0.8;
  long total_steps = 0;        // T; must be positive
  double min_difficulty = 0.0;  // computed from the pair set, not user-set
  std::uint64_t seed = 0;
  int windows = 100;
  long shard_size = 0;  // 0 = emit each window's full eligible set

  double gamma() const;
};

// Raw competence gamma * sqrt(alpha*t/T + beta*(1 - t/T)*min_d^2).
double competence_unclamped(long t, const CurriculumConfig& cfg);

// The schedule value actually used: clamped into [min_difficulty, 1].
// Without the clamp the eligible set at t=0 would be empty whenever
// min_difficulty > 0. Throws on t outside [0, T].
double competence(long t, const CurriculumConfig& cfg);

// Pairs with difficulty <= c, order preserved.
std::vector<std::size_t> eligible_indices(const std::vector<QAPair>& pairs,
                                          double c);
std::vector<QAPair> eligible(const std::vector<QAPair>& pairs, double c);

struct WindowPlan {
  int index = 0;
  long start_step = 0;
  double competence = 0.0;  // c used by this window
  long eligible_count = 0;
};

struct CurriculumSchedule {
  CurriculumConfig config;  // with min_difficulty filled in
  std::vector<WindowPlan> windows;
  // Pair indices sorted ascending by difficulty (ties keep input order).
  // Window w's eligible set is the first windows[w].eligible_count entries.
  std::vector<std::size_t> by_difficulty;
};

// Splits T into cfg.windows contiguous windows. Non-terminal windows use
// c(window start); the terminal window uses c(T) = 1 so the last shard
// always covers the full pair set. Throws on an empty pair set or invalid
// config.
CurriculumSchedule build_schedule(const std::vector<QAPair>& pairs,
                                  CurriculumConfig cfg);

// Writes window_<k>.jsonl shards into `shard_dir` plus a schedule.json
// sidecar at `sidecar_path`. Each shard record is the QA record extended
// with the window index and the competence used. shard_size == 0 writes the
// full eligible set in pair order; otherwise shard_size seeded uniform
// draws (with replacement) from the eligible set.
void write_schedule(const CurriculumSchedule& schedule,
                    const std::vector<QAPair>& pairs,
                    const std::filesystem::path& shard_dir,
                    const std::filesystem::path& sidecar_path);

}  // namespace ilgqa

#endif  // ILGQA_CURRICULUM_HPP_
