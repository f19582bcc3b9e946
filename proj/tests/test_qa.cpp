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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "ilgqa/errors.hpp"
#include "ilgqa/qa.hpp"

using namespace ilgqa;

namespace {

Corpus one_scene_corpus() {
  RawCorpus raw;
  raw.domain = Domain::kFashion;
  raw.scenes.push_back({"s1", "images/s1.png"});
  raw.assets.push_back({"16", "s1", "black", "coat", Rect{10, 20, 50, 90}});
  raw.assets.push_back({"17", "s1", "blue", "jacket", std::nullopt});
  return build_corpus(std::move(raw), default_lexicon(Domain::kFashion));
}

// Asset 16 with the three-step container chain, asset 17 box-less with a
// single step.
std::map<std::string, LayoutGraph> coat_graphs() {
  AlignedMention m16;
  m16.asset_id = "16";
  m16.scene_id = "s1";
  m16.color = "black";
  m16.asset_type = "coat";
  m16.bbox = Rect{10, 20, 50, 90};
  m16.source = {"d1", 1, UtteranceField::kUser};
  ParsedSpatialChain chain;
  chain.steps = {{"in", "second row"},
                 {"of", "third compartment"},
                 {"in", "leftmost cupboard"}};
  chain.surface_text =
      "in the second row of the third compartment in the leftmost cupboard";
  m16.spatial_chain = chain;

  AlignedMention m17;
  m17.asset_id = "17";
  m17.scene_id = "s1";
  m17.color = "blue";
  m17.asset_type = "jacket";
  m17.source = {"d1", 2, UtteranceField::kSystem};
  ParsedSpatialChain rack;
  rack.steps = {{"on", "rack"}};
  rack.surface_text = "on the rack";
  m17.spatial_chain = rack;

  LayoutGraph g;
  g.scene_id = "s1";
  merge_into(g, subgraph_from_mention(m16));
  merge_into(g, subgraph_from_mention(m17));
  return {{"s1", g}};
}

const QAPair* find_pair(const GenerationResult& r, QATaskType type,
                        const std::string& asset_id,
                        const std::string& answer) {
  for (const auto& p : r.pairs) {
    if (p.task_type == type && p.asset_id == asset_id && p.answer == answer) {
      return &p;
    }
  }
  return nullptr;
}

}  // namespace

TEST_CASE("task type names round-trip") {
  for (QATaskType t : kAllTaskTypes) {
    CHECK(parse_task_type(to_string(t)) == t);
  }
  CHECK(to_string(QATaskType::kPoVQA) == "PoVQA");
  CHECK_THROWS_AS(parse_task_type("XYZ"), InputError);
}

TEST_CASE("render_region prints the corner convention") {
  CHECK(render_region(Rect{10, 20, 50, 90}) == "[10, 20, 50, 90]");
  CHECK(render_region(Rect{0, 0, 0, 0}) == "[0, 0, 0, 0]");
}

TEST_CASE("annotate_difficulty") {
  CHECK(annotate_difficulty(3, 3) == doctest::Approx(1.0));
  CHECK(annotate_difficulty(3, 6) == doctest::Approx(0.5));
  CHECK(annotate_difficulty(1, 4) == doctest::Approx(0.25));
  CHECK_THROWS_AS(annotate_difficulty(1, 0), InputError);
  CHECK_THROWS_AS(annotate_difficulty(5, 4), InternalError);
  CHECK_THROWS_AS(annotate_difficulty(0, 4), InternalError);
}

TEST_CASE("generation on the coat scene") {
  GenerationResult r = generate(coat_graphs(), one_scene_corpus());

  // Asset 16: 3 paths, bbox. Asset 17: 1 path, no bbox.
  // 16: PVQA 2 + RVQA 2 + PoVQA 6 + PSQA 3 + RSQA 3 + VSQA 3 = 19
  // 17: PVQA 2 + PoVQA 2 + PSQA 1 + VSQA 1 = 6
  CHECK(r.pairs.size() == 25);
  CHECK(r.max_spanned == 4);
  CHECK(r.skipped_no_bbox == 2);  // RVQA and RSQA for 17
  CHECK(r.deduplicated == 0);
  CHECK(r.per_task.at(QATaskType::kPVQA) == 4);
  CHECK(r.per_task.at(QATaskType::kRVQA) == 2);
  CHECK(r.per_task.at(QATaskType::kPoVQA) == 8);
  CHECK(r.per_task.at(QATaskType::kPSQA) == 4);
  CHECK(r.per_task.at(QATaskType::kRSQA) == 3);
  CHECK(r.per_task.at(QATaskType::kVSQA) == 4);

  const QAPair* pvqa = find_pair(r, QATaskType::kPVQA, "16", "black");
  REQUIRE(pvqa != nullptr);
  CHECK(pvqa->question == "What is the color of item 16?");
  CHECK(pvqa->raw_span_count == 1);
  CHECK(pvqa->difficulty == doctest::Approx(0.25));
  CHECK(pvqa->scene_id == "s1");
  CHECK(pvqa->image_path == "images/s1.png");

  const QAPair* pvqa_type = find_pair(r, QATaskType::kPVQA, "16", "coat");
  REQUIRE(pvqa_type != nullptr);
  CHECK(pvqa_type->question == "What is the type of item 16?");

  const QAPair* rvqa = find_pair(r, QATaskType::kRVQA, "16", "black");
  REQUIRE(rvqa != nullptr);
  CHECK(rvqa->question ==
        "What is the color of item 16 in region? Region: [10, 20, 50, 90]");

  const std::string full_chain =
      "in the second row of the third compartment in the leftmost cupboard";
  const QAPair* psqa = find_pair(r, QATaskType::kPSQA, "16", full_chain);
  REQUIRE(psqa != nullptr);
  CHECK(psqa->question == "Where is the item 16?");
  CHECK(psqa->raw_span_count == 4);
  CHECK(psqa->difficulty == doctest::Approx(1.0));

  const QAPair* rsqa = find_pair(r, QATaskType::kRSQA, "16", full_chain);
  REQUIRE(rsqa != nullptr);
  CHECK(rsqa->question ==
        "Where is the item 16 in region? Region: [10, 20, 50, 90]");

  const QAPair* vsqa = find_pair(r, QATaskType::kVSQA, "16", full_chain);
  REQUIRE(vsqa != nullptr);
  CHECK(vsqa->question == "Where is the black coat 16?");

  const QAPair* povqa = find_pair(r, QATaskType::kPoVQA, "16", "black");
  REQUIRE(povqa != nullptr);
  CHECK(povqa->question.starts_with("What is the color of item 16 in the"));

  const QAPair* vsqa17 = find_pair(r, QATaskType::kVSQA, "17", "on the rack");
  REQUIRE(vsqa17 != nullptr);
  CHECK(vsqa17->question == "Where is the blue jacket 17?");
  CHECK(vsqa17->raw_span_count == 2);
  CHECK(vsqa17->difficulty == doctest::Approx(0.5));
}

TEST_CASE("every question carries its asset id and regions are rendered") {
  GenerationResult r = generate(coat_graphs(), one_scene_corpus());
  for (const auto& p : r.pairs) {
    CHECK(p.question.find(p.asset_id) != std::string::npos);
    CHECK(p.difficulty > 0.0);
    CHECK(p.difficulty <= 1.0);
    if (p.task_type == QATaskType::kRVQA ||
        p.task_type == QATaskType::kRSQA) {
      CHECK(p.question.find("[10, 20, 50, 90]") != std::string::npos);
    }
  }
  // The corpus-wide difficulty maximum is exactly 1.
  double max_d = 0.0;
  for (const auto& p : r.pairs) max_d = std::max(max_d, p.difficulty);
  CHECK(max_d == doctest::Approx(1.0));
}

TEST_CASE("longest-path-only keeps one spatial pair per task") {
  GenerateOptions options;
  options.longest_path_only = true;
  GenerationResult r = generate(coat_graphs(), one_scene_corpus(), options);
  // 16: PVQA 2 + RVQA 2 + PoVQA 2 + PSQA 1 + RSQA 1 + VSQA 1 = 9
  // 17: PVQA 2 + PoVQA 2 + PSQA 1 + VSQA 1 = 6
  CHECK(r.pairs.size() == 15);
  CHECK(r.per_task.at(QATaskType::kPSQA) == 2);
  const std::string full_chain =
      "in the second row of the third compartment in the leftmost cupboard";
  CHECK(find_pair(r, QATaskType::kPSQA, "16", full_chain) != nullptr);
  CHECK(find_pair(r, QATaskType::kPSQA, "16", "in the second row") ==
        nullptr);
}

TEST_CASE("generation on empty graphs") {
  Corpus corpus = one_scene_corpus();
  std::map<std::string, LayoutGraph> graphs;
  GenerationResult r = generate(graphs, corpus);
  CHECK(r.pairs.empty());
  CHECK(r.max_spanned == 0);

  // A graph with no asset nodes produces nothing either.
  LayoutGraph empty;
  empty.scene_id = "s1";
  graphs.emplace("s1", empty);
  r = generate(graphs, corpus);
  CHECK(r.pairs.empty());
}

TEST_CASE("string-identical pairs are deduplicated keep-first") {
  // Two single-node graphs in different scenes sharing one asset id and
  // metadata produce distinct pairs (scene differs); within one scene the
  // same pair cannot appear twice, so synthesize the collision through a
  // duplicate path surface.
  RawCorpus raw;
  raw.domain = Domain::kFashion;
  raw.scenes.push_back({"s1", "images/s1.png"});
  raw.assets.push_back({"16", "s1", "black", "coat", std::nullopt});
  Corpus corpus = build_corpus(std::move(raw),
                               default_lexicon(Domain::kFashion));

  LayoutGraph g;
  g.scene_id = "s1";
  NodeKey a{NodeKind::kAsset, "16"};
  NodeKey rack{NodeKind::kBackground, "rack"};
  NodeKey shelf{NodeKind::kBackground, "shelf"};
  g.nodes.emplace(a, AssetNode{"16", "black", "coat", std::nullopt});
  g.nodes.emplace(rack, BackgroundNode{"rack"});
  g.nodes.emplace(shelf, BackgroundNode{"shelf"});
  g.edges[{a, rack, "on"}] = {{"d1", 1}};
  g.edges[{a, shelf, "on"}] = {{"d1", 2}};
  // Both one-step paths render the same surface text.
  g.surface_paths[{a, {{"on", "rack"}}}] = "on the rack";
  g.surface_paths[{a, {{"on", "shelf"}}}] = "on the rack";

  GenerationResult r = generate({{"s1", g}}, corpus);
  // PSQA and VSQA each collapse the two identical (question, answer)
  // renderings; PoVQA keeps both (the position slot differs... it does
  // not, so those collapse too).
  CHECK(r.deduplicated > 0);
  long psqa = 0;
  for (const auto& p : r.pairs) {
    if (p.task_type == QATaskType::kPSQA) ++psqa;
  }
  CHECK(psqa == 1);
}

TEST_CASE("qa pairs file round-trips with a stable field order") {
  GenerationResult r = generate(coat_graphs(), one_scene_corpus());
  const auto path =
      std::filesystem::temp_directory_path() / "ilgqa_qa_test.jsonl";
  write_qa_pairs(r.pairs, path);

  std::ifstream in(path);
  std::string first_line;
  std::getline(in, first_line);
  CHECK(first_line.starts_with("{\"task_type\":"));
  CHECK(first_line.find("\"question\":") < first_line.find("\"answer\":"));
  CHECK(first_line.find("\"answer\":") < first_line.find("\"scene_id\":"));

  std::vector<QAPair> back = read_qa_pairs(path);
  REQUIRE(back.size() == r.pairs.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].task_type == r.pairs[i].task_type);
    CHECK(back[i].question == r.pairs[i].question);
    CHECK(back[i].answer == r.pairs[i].answer);
    CHECK(back[i].difficulty == doctest::Approx(r.pairs[i].difficulty));
  }

  // Writing twice produces identical bytes.
  const auto path2 =
      std::filesystem::temp_directory_path() / "ilgqa_qa_test2.jsonl";
  write_qa_pairs(r.pairs, path2);
  std::stringstream b1, b2;
  b1 << std::ifstream(path).rdbuf();
  b2 << std::ifstream(path2).rdbuf();
  CHECK(b1.str() == b2.str());
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("read_qa_pairs validates records") {
  const auto path =
      std::filesystem::temp_directory_path() / "ilgqa_qa_bad.jsonl";
  {
    std::ofstream out(path);
    out << R"({"task_type": "PVQA", "question": "q", "answer": "a", )"
        << R"("scene_id": "s", "image_path": "i", "asset_id": "1", )"
        << R"("raw_span_count": 0, "difficulty": 0.5})"
        << "\n";
  }
  CHECK_THROWS_AS(read_qa_pairs(path), InputError);
  {
    std::ofstream out(path);
    out << R"({"task_type": "WHAT", "question": "q", "answer": "a", )"
        << R"("scene_id": "s", "image_path": "i", "asset_id": "1", )"
        << R"("raw_span_count": 1, "difficulty": 0.5})"
        << "\n";
  }
  CHECK_THROWS_AS(read_qa_pairs(path), InputError);
  std::filesystem::remove(path);
}

namespace {

// Brute-force (task_type, asset_id, steps) enumeration straight from the
// multiplicity rules; shares no code with generate().
std::multiset<std::tuple<QATaskType, std::string, StepList>> expected_triples(
    const std::map<std::string, LayoutGraph>& graphs) {
  std::multiset<std::tuple<QATaskType, std::string, StepList>> out;
  for (const auto& [scene_id, g] : graphs) {
    for (const auto& [key, node] : g.nodes) {
      const auto* asset = std::get_if<AssetNode>(&node);
      if (!asset) continue;
      auto paths = walk(g, key);
      const bool has_bbox = asset->bbox.has_value();
      for (int i = 0; i < 2; ++i) {
        out.insert({QATaskType::kPVQA, asset->asset_id, {}});
        if (has_bbox) out.insert({QATaskType::kRVQA, asset->asset_id, {}});
      }
      for (const auto& p : paths) {
        out.insert({QATaskType::kPoVQA, asset->asset_id, p.steps});
        out.insert({QATaskType::kPoVQA, asset->asset_id, p.steps});
        out.insert({QATaskType::kPSQA, asset->asset_id, p.steps});
        if (has_bbox) {
          out.insert({QATaskType::kRSQA, asset->asset_id, p.steps});
        }
        out.insert({QATaskType::kVSQA, asset->asset_id, p.steps});
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("generator emits exactly the brute-force triple multiset") {
  std::mt19937 rng(555);
  static const std::vector<std::string> labels = {
      "rack", "shelf", "counter", "window", "cupboard"};
  static const std::vector<std::string> fashion_colors = {"black", "blue",
                                                          "red", "white"};
  static const std::vector<std::string> fashion_types = {"coat", "jacket",
                                                         "hat", "dress"};

  for (int trial = 0; trial < 30; ++trial) {
    RawCorpus raw;
    raw.domain = Domain::kFashion;
    std::map<std::string, LayoutGraph> graphs;
    const int scenes = 1 + static_cast<int>(rng() % 4);
    for (int s = 0; s < scenes; ++s) {
      std::string scene_id = "s" + std::to_string(s);
      raw.scenes.push_back({scene_id, "images/" + scene_id + ".png"});
      LayoutGraph g;
      g.scene_id = scene_id;
      const int assets = 1 + static_cast<int>(rng() % 3);
      for (int a = 0; a < assets; ++a) {
        AssetRecord rec;
        rec.asset_id = std::to_string(100 + a);
        rec.scene_id = scene_id;
        rec.color = fashion_colors[rng() % fashion_colors.size()];
        rec.asset_type = fashion_types[rng() % fashion_types.size()];
        if (rng() % 2) rec.bbox = Rect{0, 0, 10, 10};
        raw.assets.push_back(rec);

        NodeKey key{NodeKind::kAsset, rec.asset_id};
        g.nodes.emplace(key, AssetNode{rec.asset_id, rec.color,
                                       rec.asset_type, rec.bbox});
        // A random chain of distinct background items.
        NodeKey from = key;
        const int steps = static_cast<int>(rng() % 4);
        for (int st = 0; st < steps; ++st) {
          std::string label =
              labels[st] + "_" + std::to_string(a);  // distinct per asset
          NodeKey to{NodeKind::kBackground, label};
          g.nodes.emplace(to, BackgroundNode{label});
          g.edges[{from, to, "in"}] = {{"d1", 1}};
          from = to;
        }
      }
      graphs.emplace(scene_id, std::move(g));
    }
    Corpus corpus =
        build_corpus(std::move(raw), default_lexicon(Domain::kFashion));

    GenerationResult r = generate(graphs, corpus);
    CHECK(r.deduplicated == 0);
    std::multiset<std::tuple<QATaskType, std::string, StepList>> got;
    for (const auto& p : r.pairs) {
      got.insert({p.task_type, p.asset_id, p.steps});
    }
    CHECK(got == expected_triples(graphs));
  }
}
