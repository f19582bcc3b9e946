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

#ifndef ILGQA_LAYOUT_GRAPH_HPP_
#define ILGQA_LAYOUT_GRAPH_HPP_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ilgqa/corpus.hpp"
#include "ilgqa/extraction.hpp"

namespace ilgqa {

enum class NodeKind { kAsset, kBackground };

// Asset nodes are keyed by asset id, background nodes by their full
// normalized label ("leftmost cupboard" is a different node than
// "cupboard"). The kind keeps the two namespaces apart.
struct NodeKey {
  NodeKind kind = NodeKind::kAsset;
  std::string name;

  auto operator<=>(const NodeKey&) const = default;
};

struct AssetNode {
  std::string asset_id;
  std::string color;
  std::string asset_type;
  std::optional<Rect> bbox;

  friend bool operator==(const AssetNode&, const AssetNode&) = default;
};

struct BackgroundNode {
  std::string label;

  friend bool operator==(const BackgroundNode&, const BackgroundNode&) =
      default;
};

using Node = std::variant<AssetNode, BackgroundNode>;

NodeKey key_of(const Node& node);

struct EdgeKey {
  NodeKey from;
  NodeKey to;
  std::string relation;  // positional preposition

  auto operator<=>(const EdgeKey&) const = default;
};

// (dialogue_id, turn_index) pairs recording which turns asserted an edge.
using TurnRef = std::pair<std::string, int>;
using Provenance = std::vector<TurnRef>;  // sorted, deduplicated

// Ordered (relation, background label) steps; also the identity of a
// recorded path.
using StepList = std::vector<std::pair<std::string, std::string>>;
using PathKey = std::pair<NodeKey, StepList>;

// Per-scene incremental layout graph. A value type: ordered containers make
// traversal, equality and serialization deterministic, and structural
// equality coincides with byte equality of the canonical serialization.
struct LayoutGraph {
  std::string scene_id;
  std::map<NodeKey, Node> nodes;
  std::map<EdgeKey, Provenance> edges;
  // Verbatim spatial-description spans, keyed by the chain they described.
  // Answer rendering prefers these over synthesized step joins.
  std::map<PathKey, std::string> surface_paths;

  friend bool operator==(const LayoutGraph&, const LayoutGraph&) = default;
};

// A walk result: the asset node plus the background chain it reaches.
struct SpatialPath {
  NodeKey start;
  StepList steps;
  std::string surface_text;
  int spanned_nodes = 0;  // always 1 + |steps|

  friend bool operator==(const SpatialPath&, const SpatialPath&) = default;
};

// One asset node and its chain as a graph: asset -> bi1 -> bi2 -> ...
// A mention without a chain produces a single-node graph.
LayoutGraph subgraph_from_mention(const AlignedMention& mention);

// Unions `sub` into `g` by node/edge key. Absent asset fields (empty
// strings, missing bbox) are filled in from `sub`, so consistent merges
// commute; a field present on both sides with different values keeps the
// first writer and appends a message to `warnings` when given. Edge
// provenance lists are unioned. Throws SceneMismatchError.
void merge_into(LayoutGraph& g, const LayoutGraph& sub,
                std::vector<std::string>* warnings = nullptr);
LayoutGraph merge(LayoutGraph g, const LayoutGraph& sub,
                  std::vector<std::string>* warnings = nullptr);

struct WalkOptions {
  int max_steps = 6;  // bounds path enumeration on cyclic merges
};

// All simple directed paths out of an asset node, one per reachable prefix,
// ordered by (length, node key sequence, relation sequence). Surface text
// comes from a recorded span when one covers the exact chain, otherwise
// it is synthesized as "<rel> the <item> <rel> the <item> ...".
std::vector<SpatialPath> walk(const LayoutGraph& g, const NodeKey& asset_key,
                              const WalkOptions& options = {});

// Stored fields of an asset node. Throws NodeNotFoundError for unknown or
// background keys.
const AssetNode& get_info(const LayoutGraph& g, const NodeKey& asset_key);

// Canonical JSON serialization: equal graphs produce identical bytes.
std::string serialize(const LayoutGraph& g);
LayoutGraph deserialize(const std::string& bytes);

// "in the second row of the third compartment" from the step list alone.
std::string synthesize_surface(const StepList& steps);

}  // namespace ilgqa

#endif  // ILGQA_LAYOUT_GRAPH_HPP_
