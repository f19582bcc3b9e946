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

#include "ilgqa/corpus.hpp"

#include <fstream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "ilgqa/errors.hpp"

namespace ilgqa {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_line(const std::string& file, long line_no,
                const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(file, line_no, "<record>", e.what());
  }
}

std::string get_string(const json& obj, const char* field,
                       const std::string& file, long line) {
  if (!obj.contains(field) || !obj.at(field).is_string()) {
    throw ParseError(file, line, field, "missing or not a string");
  }
  return obj.at(field).get<std::string>();
}

int get_int(const json& obj, const char* field, const std::string& file,
            long line) {
  if (!obj.contains(field) || !obj.at(field).is_number_integer()) {
    throw ParseError(file, line, field, "missing or not an integer");
  }
  return obj.at(field).get<int>();
}

Rect parse_bbox(const json& value, const std::string& file, long line) {
  if (!value.is_array() || value.size() != 4) {
    throw ParseError(file, line, "bbox",
                     "must be an array [x1, y1, x2, y2]");
  }
  for (const auto& v : value) {
    if (!v.is_number_integer()) {
      throw ParseError(file, line, "bbox", "coordinates must be integers");
    }
  }
  Rect r{value[0].get<std::int64_t>(), value[1].get<std::int64_t>(),
         value[2].get<std::int64_t>(), value[3].get<std::int64_t>()};
  if (r.x1 < 0 || r.y1 < 0 || r.x1 > r.x2 || r.y1 > r.y2) {
    throw ParseError(file, line, "bbox",
                     "requires 0 <= x1 <= x2 and 0 <= y1 <= y2");
  }
  return r;
}

// Runs `fn` over each non-empty line of a jsonl file.
template <typename Fn>
void for_each_record(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("missing file '" + path.string() + "'");
  }
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    fn(parse_line(path.string(), line_no, line), line_no);
  }
}

bool in_lexicon(const std::vector<std::string>& values,
                const std::string& v) {
  for (const auto& x : values) {
    if (x == v) return true;
  }
  return false;
}

}  // namespace

const AssetRecord* Corpus::find_asset(const std::string& scene_id,
                                      const std::string& asset_id) const {
  auto it = assets.find({scene_id, asset_id});
  return it == assets.end() ? nullptr : &it->second;
}

std::vector<const AssetRecord*> Corpus::assets_in_scene(
    const std::string& scene_id) const {
  std::vector<const AssetRecord*> out;
  for (auto it = assets.lower_bound({scene_id, ""});
       it != assets.end() && it->first.first == scene_id; ++it) {
    out.push_back(&it->second);
  }
  return out;
}

Corpus build_corpus(RawCorpus raw, const Lexicon& lexicon) {
  Corpus corpus;
  corpus.domain = raw.domain;

  for (auto& scene : raw.scenes) {
    if (scene.scene_id.empty()) {
      throw InputError("scene record with empty scene_id");
    }
    if (scene.image_path.empty()) {
      throw InputError("scene '" + scene.scene_id + "' has empty image_path");
    }
    if (!corpus.scenes.emplace(scene.scene_id, scene).second) {
      throw InputError("duplicate scene_id '" + scene.scene_id + "'");
    }
  }

  std::unordered_set<std::string> dialogue_ids;
  for (auto& dialogue : raw.dialogues) {
    if (dialogue.dialogue_id.empty()) {
      throw InputError("dialogue record with empty dialogue_id");
    }
    if (!dialogue_ids.insert(dialogue.dialogue_id).second) {
      throw InputError("duplicate dialogue_id '" + dialogue.dialogue_id +
                       "'");
    }
    int expected = 1;
    for (const auto& turn : dialogue.turns) {
      if (turn.index != expected) {
        throw InputError("dialogue '" + dialogue.dialogue_id +
                         "': turn indices must be contiguous from 1, got " +
                         std::to_string(turn.index) + " where " +
                         std::to_string(expected) + " was expected");
      }
      ++expected;
      if (turn.scene_id.empty()) {
        throw InputError("dialogue '" + dialogue.dialogue_id + "' turn " +
                         std::to_string(turn.index) + ": empty scene_id");
      }
      if (!corpus.scenes.count(turn.scene_id)) {
        throw InputError("dialogue '" + dialogue.dialogue_id + "' turn " +
                         std::to_string(turn.index) +
                         ": dangling scene_id '" + turn.scene_id + "'");
      }
    }
  }
  corpus.dialogues = std::move(raw.dialogues);

  for (auto& asset : raw.assets) {
    std::string where =
        "asset '" + asset.asset_id + "' in scene '" + asset.scene_id + "'";
    if (asset.asset_id.empty()) {
      throw InputError("asset record with empty asset_id");
    }
    if (!corpus.scenes.count(asset.scene_id)) {
      throw InputError(where + ": dangling scene_id");
    }
    if (!in_lexicon(lexicon.colors, asset.color)) {
      throw InputError(where + ": field 'color' value '" + asset.color +
                       "' is not in the " + to_string(corpus.domain) +
                       " color lexicon");
    }
    if (!in_lexicon(lexicon.asset_types, asset.asset_type)) {
      throw InputError(where + ": field 'asset_type' value '" +
                       asset.asset_type + "' is not in the " +
                       to_string(corpus.domain) + " type lexicon");
    }
    if (asset.bbox) {
      const Rect& r = *asset.bbox;
      if (r.x1 < 0 || r.y1 < 0 || r.x1 > r.x2 || r.y1 > r.y2) {
        throw InputError(where + ": field 'bbox' violates x1<=x2, y1<=y2, "
                                 "non-negative");
      }
    }
    auto key = std::make_pair(asset.scene_id, asset.asset_id);
    if (!corpus.assets.emplace(key, asset).second) {
      throw InputError("duplicate asset id '" + asset.asset_id +
                       "' in scene '" + asset.scene_id + "'");
    }
  }

  return corpus;
}

Corpus ingest_canonical(const std::filesystem::path& path, Domain domain) {
  return ingest_canonical(path, domain, default_lexicon(domain));
}

Corpus ingest_canonical(const std::filesystem::path& path, Domain domain,
                        const Lexicon& lexicon) {
  RawCorpus raw;
  raw.domain = domain;

  for_each_record(path / "dialogues.jsonl", [&](const json& rec, long line) {
    const std::string file = (path / "dialogues.jsonl").string();
    Dialogue d;
    d.dialogue_id = get_string(rec, "dialogue_id", file, line);
    if (!rec.contains("turns") || !rec.at("turns").is_array()) {
      throw ParseError(file, line, "turns", "missing or not an array");
    }
    for (const auto& t : rec.at("turns")) {
      Turn turn;
      turn.index = get_int(t, "index", file, line);
      turn.user_utterance = get_string(t, "user_utterance", file, line);
      turn.system_response = get_string(t, "system_response", file, line);
      turn.scene_id = get_string(t, "scene_id", file, line);
      d.turns.push_back(std::move(turn));
    }
    raw.dialogues.push_back(std::move(d));
  });

  for_each_record(path / "scenes.jsonl", [&](const json& rec, long line) {
    const std::string file = (path / "scenes.jsonl").string();
    SceneRecord s;
    s.scene_id = get_string(rec, "scene_id", file, line);
    s.image_path = get_string(rec, "image_path", file, line);
    raw.scenes.push_back(std::move(s));
  });

  for_each_record(path / "assets.jsonl", [&](const json& rec, long line) {
    const std::string file = (path / "assets.jsonl").string();
    AssetRecord a;
    a.asset_id = get_string(rec, "asset_id", file, line);
    a.scene_id = get_string(rec, "scene_id", file, line);
    a.color = get_string(rec, "color", file, line);
    a.asset_type = get_string(rec, "asset_type", file, line);
    if (rec.contains("bbox") && !rec.at("bbox").is_null()) {
      a.bbox = parse_bbox(rec.at("bbox"), file, line);
    }
    raw.assets.push_back(std::move(a));
  });

  return build_corpus(std::move(raw), lexicon);
}

void write_canonical(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::ofstream dials(dir / "dialogues.jsonl");
  for (const auto& d : corpus.dialogues) {
    ordered_json rec;
    rec["dialogue_id"] = d.dialogue_id;
    rec["turns"] = ordered_json::array();
    for (const auto& t : d.turns) {
      ordered_json turn;
      turn["index"] = t.index;
      turn["user_utterance"] = t.user_utterance;
      turn["system_response"] = t.system_response;
      turn["scene_id"] = t.scene_id;
      rec["turns"].push_back(std::move(turn));
    }
    dials << rec.dump() << "\n";
  }

  std::ofstream scenes(dir / "scenes.jsonl");
  for (const auto& [id, s] : corpus.scenes) {
    ordered_json rec;
    rec["scene_id"] = s.scene_id;
    rec["image_path"] = s.image_path;
    scenes << rec.dump() << "\n";
  }

  std::ofstream assets(dir / "assets.jsonl");
  for (const auto& [key, a] : corpus.assets) {
    ordered_json rec;
    rec["asset_id"] = a.asset_id;
    rec["scene_id"] = a.scene_id;
    rec["color"] = a.color;
    rec["asset_type"] = a.asset_type;
    if (a.bbox) {
      rec["bbox"] = {a.bbox->x1, a.bbox->y1, a.bbox->x2, a.bbox->y2};
    }
    assets << rec.dump() << "\n";
  }
}

}  // namespace ilgqa
