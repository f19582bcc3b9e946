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
//
// Adapter for SIMMC 2.0-style releases: one dialogues.json with scene_id
// spans per dialogue, one scenes/<scene_id>_scene.json per scene with
// [x, y, h, w] object boxes, and one metadata.json keyed by prefab path.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include <json.hpp>

#include "ilgqa/corpus.hpp"
#include "ilgqa/errors.hpp"

namespace ilgqa {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("missing file '" + path.string() + "'");
  }
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw InputError("file '" + path.string() +
                     "' is not valid JSON: " + e.what());
  }
}

[[noreturn]] void unsupported(const std::string& file,
                              const std::string& what) {
  throw InputError("unsupported SIMMC schema in '" + file + "': " + what);
}

// Lowercases and single-spaces a metadata attribute value ("Light Blue" ->
// "light blue"). Commas are kept as written; lexicon entries use ", ".
std::string normalize_attr(const std::string& raw) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c < 128 ? static_cast<char>(std::tolower(c))
                          : static_cast<char>(c));
  }
  return out;
}

std::string id_to_string(const json& v, const std::string& file,
                         const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  unsupported(file, what + " must be a string or integer");
}

}  // namespace

RawCorpus convert_simmc(const std::filesystem::path& path, Domain domain) {
  RawCorpus raw;
  raw.domain = domain;

  const auto dialogues_path = path / "dialogues.json";
  const json dialogues_doc = load_json(dialogues_path);
  if (!dialogues_doc.contains("dialogue_data") ||
      !dialogues_doc.at("dialogue_data").is_array()) {
    unsupported(dialogues_path.string(), "missing 'dialogue_data' list");
  }

  const auto metadata_path = path / "metadata.json";
  const json metadata = load_json(metadata_path);
  if (!metadata.is_object()) {
    unsupported(metadata_path.string(),
                "metadata must map prefab paths to attribute objects");
  }

  for (const auto& d : dialogues_doc.at("dialogue_data")) {
    if (!d.contains("dialogue_idx")) {
      unsupported(dialogues_path.string(), "dialogue missing 'dialogue_idx'");
    }
    Dialogue dialogue;
    dialogue.dialogue_id =
        id_to_string(d.at("dialogue_idx"), dialogues_path.string(),
                     "'dialogue_idx'");
    if (!d.contains("scene_ids") || !d.at("scene_ids").is_object()) {
      unsupported(dialogues_path.string(),
                  "dialogue '" + dialogue.dialogue_id +
                      "' missing 'scene_ids' map");
    }
    // scene_ids maps 0-based turn start offsets to scene ids; a turn uses
    // the scene with the largest start not past it.
    std::map<long, std::string> scene_spans;
    for (const auto& [start, scene] : d.at("scene_ids").items()) {
      long off = 0;
      try {
        off = std::stol(start);
      } catch (const std::exception&) {
        unsupported(dialogues_path.string(),
                    "scene_ids key '" + start + "' is not a turn offset");
      }
      if (!scene.is_string()) {
        unsupported(dialogues_path.string(), "scene_ids values must be "
                                             "scene id strings");
      }
      scene_spans[off] = scene.get<std::string>();
    }
    if (scene_spans.empty() || scene_spans.begin()->first != 0) {
      unsupported(dialogues_path.string(),
                  "dialogue '" + dialogue.dialogue_id +
                      "' scene_ids must cover turn 0");
    }
    if (!d.contains("dialogue") || !d.at("dialogue").is_array()) {
      unsupported(dialogues_path.string(),
                  "dialogue '" + dialogue.dialogue_id +
                      "' missing 'dialogue' turn list");
    }
    int idx = 0;
    for (const auto& t : d.at("dialogue")) {
      if (!t.contains("transcript") || !t.at("transcript").is_string() ||
          !t.contains("system_transcript") ||
          !t.at("system_transcript").is_string()) {
        unsupported(dialogues_path.string(),
                    "turns need 'transcript' and 'system_transcript'");
      }
      Turn turn;
      turn.index = idx + 1;
      turn.user_utterance = t.at("transcript").get<std::string>();
      turn.system_response = t.at("system_transcript").get<std::string>();
      auto span = scene_spans.upper_bound(idx);
      --span;
      turn.scene_id = span->second;
      dialogue.turns.push_back(std::move(turn));
      ++idx;
    }
    raw.dialogues.push_back(std::move(dialogue));
  }

  const auto scenes_dir = path / "scenes";
  if (!std::filesystem::is_directory(scenes_dir)) {
    throw InputError("missing directory '" + scenes_dir.string() + "'");
  }
  std::vector<std::filesystem::path> scene_files;
  for (const auto& entry : std::filesystem::directory_iterator(scenes_dir)) {
    if (entry.path().filename().string().ends_with("_scene.json")) {
      scene_files.push_back(entry.path());
    }
  }
  std::sort(scene_files.begin(), scene_files.end());

  for (const auto& scene_file : scene_files) {
    std::string name = scene_file.filename().string();
    std::string scene_id = name.substr(0, name.size() -
                                              std::string("_scene.json").size());
    SceneRecord scene;
    scene.scene_id = scene_id;
    scene.image_path = "images/" + scene_id + ".png";
    raw.scenes.push_back(std::move(scene));

    const json doc = load_json(scene_file);
    if (!doc.contains("scenes") || !doc.at("scenes").is_array() ||
        doc.at("scenes").empty()) {
      unsupported(scene_file.string(), "missing 'scenes' list");
    }
    const json& first = doc.at("scenes").at(0);
    if (!first.contains("objects") || !first.at("objects").is_array()) {
      unsupported(scene_file.string(), "missing 'objects' list");
    }
    for (const auto& obj : first.at("objects")) {
      if (!obj.contains("index") || !obj.at("index").is_number_integer()) {
        unsupported(scene_file.string(), "object missing integer 'index'");
      }
      if (!obj.contains("prefab_path") ||
          !obj.at("prefab_path").is_string()) {
        unsupported(scene_file.string(), "object missing 'prefab_path'");
      }
      AssetRecord asset;
      asset.asset_id = std::to_string(obj.at("index").get<std::int64_t>());
      asset.scene_id = scene_id;

      const std::string prefab = obj.at("prefab_path").get<std::string>();
      if (!metadata.contains(prefab) || !metadata.at(prefab).is_object()) {
        throw InputError("metadata.json has no entry for prefab '" + prefab +
                         "' referenced by scene '" + scene_id + "'");
      }
      const json& meta = metadata.at(prefab);
      if (!meta.contains("color") || !meta.at("color").is_string()) {
        unsupported(metadata_path.string(),
                    "entry '" + prefab + "' missing 'color'");
      }
      // Fashion metadata uses "assetType"; furniture uses "type".
      const char* type_key =
          meta.contains("assetType") ? "assetType" : "type";
      if (!meta.contains(type_key) || !meta.at(type_key).is_string()) {
        unsupported(metadata_path.string(),
                    "entry '" + prefab + "' missing 'assetType'/'type'");
      }
      asset.color = normalize_attr(meta.at("color").get<std::string>());
      asset.asset_type =
          normalize_attr(meta.at(type_key).get<std::string>());

      if (obj.contains("bbox") && !obj.at("bbox").is_null()) {
        const json& b = obj.at("bbox");
        if (!b.is_array() || b.size() != 4 ||
            !std::all_of(b.begin(), b.end(), [](const json& v) {
              return v.is_number_integer();
            })) {
          unsupported(scene_file.string(),
                      "object bbox must be [x, y, h, w] integers");
        }
        // SIMMC boxes are [x, y, height, width].
        std::int64_t x = b[0].get<std::int64_t>();
        std::int64_t y = b[1].get<std::int64_t>();
        std::int64_t h = b[2].get<std::int64_t>();
        std::int64_t w = b[3].get<std::int64_t>();
        asset.bbox = Rect{x, y, x + w, y + h};
      }
      raw.assets.push_back(std::move(asset));
    }
  }

  return raw;
}

Corpus ingest_simmc(const std::filesystem::path& path, Domain domain) {
  return ingest_simmc(path, domain, default_lexicon(domain));
}

Corpus ingest_simmc(const std::filesystem::path& path, Domain domain,
                    const Lexicon& lexicon) {
  return build_corpus(convert_simmc(path, domain), lexicon);
}

}  // namespace ilgqa
