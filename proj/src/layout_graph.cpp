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

#include "ilgqa/layout_graph.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "ilgqa/errors.hpp"

namespace ilgqa {

namespace {

using nlohmann::json;

void add_provenance(Provenance& list, const TurnRef& ref) {
  auto it = std::lower_bound(list.begin(), list.end(), ref);
  if (it == list.end() || *it != ref) list.insert(it, ref);
}

void merge_provenance(Provenance& into, const Provenance& from) {
  Provenance merged;
  merged.reserve(into.size() + from.size());
  std::set_union(into.begin(), into.end(), from.begin(), from.end(),
                 std::back_inserter(merged));
  into = std::move(merged);
}

std::string describe(const NodeKey& key) {
  return (key.kind == NodeKind::kAsset ? "asset '" : "background '") +
         key.name + "'";
}

// Folds `src` into `dst` field by field. An absent field (empty string,
// missing bbox) is filled in; a present-and-different one is a conflict and
// the first writer wins. Filling absent fields keeps merge results
// independent of the order sub-graphs arrive in.
bool fuse_asset(AssetNode& dst, const AssetNode& src) {
  bool conflict = false;
  auto take = [&conflict](std::string& mine, const std::string& theirs) {
    if (mine.empty()) {
      mine = theirs;
    } else if (!theirs.empty() && mine != theirs) {
      conflict = true;
    }
  };
  take(dst.color, src.color);
  take(dst.asset_type, src.asset_type);
  if (!dst.bbox) {
    dst.bbox = src.bbox;
  } else if (src.bbox && *src.bbox != *dst.bbox) {
    conflict = true;
  }
  return conflict;
}

}  // namespace

NodeKey key_of(const Node& node) {
  if (const auto* asset = std::get_if<AssetNode>(&node)) {
    return {NodeKind::kAsset, asset->asset_id};
  }
  return {NodeKind::kBackground, std::get<BackgroundNode>(node).label};
}

LayoutGraph subgraph_from_mention(const AlignedMention& mention) {
  LayoutGraph g;
  g.scene_id = mention.scene_id;

  AssetNode asset{mention.asset_id, mention.color, mention.asset_type,
                  mention.bbox};
  NodeKey asset_key = {NodeKind::kAsset, mention.asset_id};
  g.nodes.emplace(asset_key, asset);
  if (!mention.spatial_chain) return g;

  const TurnRef ref{mention.source.dialogue_id, mention.source.turn_index};
  NodeKey from = asset_key;
  StepList steps;
  for (const auto& [relation, label] : mention.spatial_chain->steps) {
    NodeKey to = {NodeKind::kBackground, label};
    g.nodes.emplace(to, BackgroundNode{label});
    Provenance& prov = g.edges[{from, to, relation}];
    add_provenance(prov, ref);
    steps.emplace_back(relation, label);
    from = to;
  }
  g.surface_paths.emplace(PathKey{asset_key, steps},
                          mention.spatial_chain->surface_text);
  return g;
}

void merge_into(LayoutGraph& g, const LayoutGraph& sub,
                std::vector<std::string>* warnings) {
  if (g.scene_id != sub.scene_id) {
    throw SceneMismatchError(g.scene_id, sub.scene_id);
  }
  for (const auto& [key, node] : sub.nodes) {
    auto [it, inserted] = g.nodes.emplace(key, node);
    if (inserted) continue;
    bool conflict = false;
    auto* mine = std::get_if<AssetNode>(&it->second);
    const auto* theirs = std::get_if<AssetNode>(&node);
    if (mine && theirs) {
      conflict = fuse_asset(*mine, *theirs);
    } else {
      conflict = it->second != node;  // background labels never differ
    }
    if (conflict && warnings) {
      warnings->push_back("scene '" + g.scene_id + "': conflicting fields "
                          "for " + describe(key) + "; keeping first");
    }
  }
  for (const auto& [key, provenance] : sub.edges) {
    merge_provenance(g.edges[key], provenance);
  }
  for (const auto& [key, surface] : sub.surface_paths) {
    g.surface_paths.emplace(key, surface);  // first writer wins
  }
}

LayoutGraph merge(LayoutGraph g, const LayoutGraph& sub,
                  std::vector<std::string>* warnings) {
  merge_into(g, sub, warnings);
  return g;
}

std::string synthesize_surface(const StepList& steps) {
  std::string out;
  for (const auto& [relation, label] : steps) {
    if (!out.empty()) out.push_back(' ');
    out += relation;
    out += " the ";
    out += label;
  }
  return out;
}

std::vector<SpatialPath> walk(const LayoutGraph& g, const NodeKey& asset_key,
                              const WalkOptions& options) {
  auto it = g.nodes.find(asset_key);
  if (it == g.nodes.end() ||
      !std::holds_alternative<AssetNode>(it->second)) {
    throw NodeNotFoundError(asset_key.name);
  }

  // Outgoing edges per node, already ordered by the edge map's key order
  // (to-key, then relation).
  std::map<NodeKey, std::vector<const EdgeKey*>> adjacency;
  for (const auto& [key, provenance] : g.edges) {
    adjacency[key.from].push_back(&key);
  }

  std::vector<SpatialPath> paths;
  StepList steps;
  std::set<NodeKey> visited{asset_key};

  auto dfs = [&](auto&& self, const NodeKey& at) -> void {
    if (static_cast<int>(steps.size()) >= options.max_steps) return;
    auto adj = adjacency.find(at);
    if (adj == adjacency.end()) return;
    for (const EdgeKey* edge : adj->second) {
      if (visited.count(edge->to)) continue;  // simple paths only
      steps.emplace_back(edge->relation, edge->to.name);
      SpatialPath p;
      p.start = asset_key;
      p.steps = steps;
      p.spanned_nodes = 1 + static_cast<int>(steps.size());
      auto recorded = g.surface_paths.find(PathKey{asset_key, steps});
      p.surface_text = recorded != g.surface_paths.end()
                           ? recorded->second
                           : synthesize_surface(steps);
      paths.push_back(std::move(p));
      visited.insert(edge->to);
      self(self, edge->to);
      visited.erase(edge->to);
      steps.pop_back();
    }
  };
  dfs(dfs, asset_key);

  std::stable_sort(paths.begin(), paths.end(),
                   [](const SpatialPath& a, const SpatialPath& b) {
                     if (a.steps.size() != b.steps.size())
                       return a.steps.size() < b.steps.size();
                     for (std::size_t i = 0; i < a.steps.size(); ++i) {
                       if (a.steps[i].second != b.steps[i].second)
                         return a.steps[i].second < b.steps[i].second;
                     }
                     for (std::size_t i = 0; i < a.steps.size(); ++i) {
                       if (a.steps[i].first != b.steps[i].first)
                         return a.steps[i].first < b.steps[i].first;
                     }
                     return false;
                   });
  return paths;
}

const AssetNode& get_info(const LayoutGraph& g, const NodeKey& asset_key) {
  auto it = g.nodes.find(asset_key);
  if (it == g.nodes.end() ||
      !std::holds_alternative<AssetNode>(it->second)) {
    throw NodeNotFoundError(asset_key.name);
  }
  return std::get<AssetNode>(it->second);
}

namespace {

constexpr int kGraphFormatVersion = 1;

json node_to_json(const Node& node) {
  json j;
  if (const auto* asset = std::get_if<AssetNode>(&node)) {
    j["kind"] = "asset";
    j["asset_id"] = asset->asset_id;
    j["color"] = asset->color;
    j["type"] = asset->asset_type;
    if (asset->bbox) {
      j["bbox"] = {asset->bbox->x1, asset->bbox->y1, asset->bbox->x2,
                   asset->bbox->y2};
    }
  } else {
    j["kind"] = "background";
    j["label"] = std::get<BackgroundNode>(node).label;
  }
  return j;
}

json key_to_json(const NodeKey& key) {
  return json::array(
      {key.kind == NodeKind::kAsset ? "asset" : "background", key.name});
}

NodeKey key_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() ||
      !j[1].is_string()) {
    throw InputError("graph file: node key must be [kind, name]");
  }
  std::string kind = j[0].get<std::string>();
  if (kind != "asset" && kind != "background") {
    throw InputError("graph file: unknown node kind '" + kind + "'");
  }
  return {kind == "asset" ? NodeKind::kAsset : NodeKind::kBackground,
          j[1].get<std::string>()};
}

}  // namespace

std::string serialize(const LayoutGraph& g) {
  json doc;
  doc["version"] = kGraphFormatVersion;
  doc["scene_id"] = g.scene_id;

  doc["nodes"] = json::array();
  for (const auto& [key, node] : g.nodes) {
    doc["nodes"].push_back(node_to_json(node));
  }

  doc["edges"] = json::array();
  for (const auto& [key, provenance] : g.edges) {
    json e;
    e["from"] = key_to_json(key.from);
    e["to"] = key_to_json(key.to);
    e["relation"] = key.relation;
    e["provenance"] = json::array();
    for (const auto& [dialogue_id, turn] : provenance) {
      e["provenance"].push_back({dialogue_id, turn});
    }
    doc["edges"].push_back(std::move(e));
  }

  doc["paths"] = json::array();
  for (const auto& [key, surface] : g.surface_paths) {
    json p;
    p["start"] = key.first.name;
    p["steps"] = json::array();
    for (const auto& [relation, label] : key.second) {
      p["steps"].push_back({relation, label});
    }
    p["surface"] = surface;
    doc["paths"].push_back(std::move(p));
  }

  return doc.dump(2) + "\n";
}

LayoutGraph deserialize(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw InputError(std::string("graph file is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object() || !doc.contains("version") ||
      !doc.at("version").is_number_integer()) {
    throw InputError("graph file: missing integer 'version'");
  }
  if (doc.at("version").get<int>() != kGraphFormatVersion) {
    throw InputError("graph file: unsupported version " +
                     doc.at("version").dump() + " (expected " +
                     std::to_string(kGraphFormatVersion) + ")");
  }
  if (!doc.contains("scene_id") || !doc.at("scene_id").is_string()) {
    throw InputError("graph file: missing 'scene_id'");
  }

  LayoutGraph g;
  g.scene_id = doc.at("scene_id").get<std::string>();

  for (const auto& j : doc.value("nodes", json::array())) {
    std::string kind = j.value("kind", "");
    if (kind == "asset") {
      AssetNode a;
      a.asset_id = j.value("asset_id", "");
      a.color = j.value("color", "");
      a.asset_type = j.value("type", "");
      if (a.asset_id.empty()) {
        throw InputError("graph file: asset node without asset_id");
      }
      if (j.contains("bbox")) {
        const auto& b = j.at("bbox");
        if (!b.is_array() || b.size() != 4) {
          throw InputError("graph file: bbox must be [x1, y1, x2, y2]");
        }
        a.bbox = Rect{b[0].get<std::int64_t>(), b[1].get<std::int64_t>(),
                      b[2].get<std::int64_t>(), b[3].get<std::int64_t>()};
      }
      g.nodes.emplace(NodeKey{NodeKind::kAsset, a.asset_id}, std::move(a));
    } else if (kind == "background") {
      std::string label = j.value("label", "");
      if (label.empty()) {
        throw InputError("graph file: background node without label");
      }
      g.nodes.emplace(NodeKey{NodeKind::kBackground, label},
                      BackgroundNode{label});
    } else {
      throw InputError("graph file: node with unknown kind '" + kind + "'");
    }
  }

  for (const auto& j : doc.value("edges", json::array())) {
    if (!j.contains("from") || !j.contains("to") || !j.contains("relation")) {
      throw InputError("graph file: edge needs from/to/relation");
    }
    EdgeKey key{key_from_json(j.at("from")), key_from_json(j.at("to")),
                j.at("relation").get<std::string>()};
    if (!g.nodes.count(key.from) || !g.nodes.count(key.to)) {
      throw InputError("graph file: edge endpoint not among nodes");
    }
    Provenance prov;
    for (const auto& p : j.value("provenance", json::array())) {
      if (!p.is_array() || p.size() != 2) {
        throw InputError("graph file: provenance entries are "
                         "[dialogue_id, turn]");
      }
      add_provenance(prov, {p[0].get<std::string>(), p[1].get<int>()});
    }
    if (prov.empty()) {
      throw InputError("graph file: edge with empty provenance");
    }
    merge_provenance(g.edges[key], prov);
  }

  for (const auto& j : doc.value("paths", json::array())) {
    if (!j.contains("start") || !j.contains("steps") ||
        !j.contains("surface")) {
      throw InputError("graph file: path needs start/steps/surface");
    }
    NodeKey start{NodeKind::kAsset, j.at("start").get<std::string>()};
    StepList steps;
    for (const auto& s : j.at("steps")) {
      if (!s.is_array() || s.size() != 2) {
        throw InputError("graph file: path steps are [relation, label]");
      }
      steps.emplace_back(s[0].get<std::string>(), s[1].get<std::string>());
    }
    g.surface_paths.emplace(PathKey{start, std::move(steps)},
                            j.at("surface").get<std::string>());
  }

  return g;
}

}  // namespace ilgqa
