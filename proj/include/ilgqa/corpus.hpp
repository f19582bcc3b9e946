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

#ifndef ILGQA_CORPUS_HPP_
#define ILGQA_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ilgqa/lexicon.hpp"

namespace ilgqa {

// Axis-aligned image-pixel rectangle, (x1, y1) top-left inclusive corner
// convention with x1 <= x2 and y1 <= y2.
struct Rect {
  std::int64_t x1 = 0;
  std::int64_t y1 = 0;
  std::int64_t x2 = 0;
  std::int64_t y2 = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// One exchange: the user speaks, the system answers, both situated in the
// scene identified by scene_id. Utterance text is kept verbatim; matching
// normalization happens later and never here.
struct Turn {
  int index = 0;  // 1-based, contiguous within a dialogue
  std::string user_utterance;
  std::string system_response;
  std::string scene_id;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Dialogue {
  std::string dialogue_id;
  std::vector<Turn> turns;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

struct SceneRecord {
  std::string scene_id;
  std::string image_path;  // opaque; existence is a CLI concern

  friend bool operator==(const SceneRecord&, const SceneRecord&) = default;
};

struct AssetRecord {
  std::string asset_id;
  std::string scene_id;
  std::string color;       // member of the domain color lexicon
  std::string asset_type;  // member of the domain type lexicon
  std::optional<Rect> bbox;

  friend bool operator==(const AssetRecord&, const AssetRecord&) = default;
};

// Canonical, validated, immutable view of one ingested corpus. Ordered maps
// keep every traversal deterministic.
struct Corpus {
  Domain domain = Domain::kFashion;
  std::vector<Dialogue> dialogues;
  std::map<std::string, SceneRecord> scenes;
  std::map<std::pair<std::string, std::string>, AssetRecord>
      assets;  // keyed by (scene_id, asset_id)

  const AssetRecord* find_asset(const std::string& scene_id,
                                const std::string& asset_id) const;
  std::vector<const AssetRecord*> assets_in_scene(
      const std::string& scene_id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Loose records as read from disk, before cross-record validation. The
// SIMMC adapter converts into this form and shares the validation path with
// canonical ingestion.
struct RawCorpus {
  Domain domain = Domain::kFashion;
  std::vector<Dialogue> dialogues;
  std::vector<SceneRecord> scenes;
  std::vector<AssetRecord> assets;
};

// Validates all corpus invariants (unique ids, contiguous turn indices,
// resolvable scene references, lexicon membership, bbox sanity) and builds
// the canonical in-memory form. Throws InputError with record context.
Corpus build_corpus(RawCorpus raw, const Lexicon& lexicon);

// Reads dialogues.jsonl / scenes.jsonl / assets.jsonl from `path`.
// Deterministic: identical bytes produce structurally equal corpora.
Corpus ingest_canonical(const std::filesystem::path& path, Domain domain);
Corpus ingest_canonical(const std::filesystem::path& path, Domain domain,
                        const Lexicon& lexicon);

// Reads a SIMMC 2.0-style release (dialogues.json, scenes/<id>_scene.json,
// metadata.json), converting [x, y, h, w] boxes to (x1, y1, x2, y2) and
// lowercasing metadata attribute values. Equivalent to converting to the
// canonical format and ingesting that.
Corpus ingest_simmc(const std::filesystem::path& path, Domain domain);
Corpus ingest_simmc(const std::filesystem::path& path, Domain domain,
                    const Lexicon& lexicon);

// The SIMMC -> canonical conversion without validation, exposed so the CLI
// can materialize canonical files from a SIMMC release.
RawCorpus convert_simmc(const std::filesystem::path& path, Domain domain);

// Writes dialogues.jsonl, scenes.jsonl and assets.jsonl under `dir`.
void write_canonical(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace ilgqa

#endif  // ILGQA_CORPUS_HPP_
