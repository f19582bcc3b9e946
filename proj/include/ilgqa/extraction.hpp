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

#ifndef ILGQA_EXTRACTION_HPP_
#define ILGQA_EXTRACTION_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ilgqa/corpus.hpp"
#include "ilgqa/lexicon.hpp"
#include "ilgqa/text.hpp"

namespace ilgqa {

enum class UtteranceField { kUser, kSystem };

// Which turn and side of the conversation a mention came from.
struct MentionSource {
  std::string dialogue_id;
  int turn_index = 0;
  UtteranceField field = UtteranceField::kUser;

  friend bool operator==(const MentionSource&, const MentionSource&) = default;
};

// Character and token extent of a match within the normalized utterance.
struct Span {
  std::size_t char_begin = 0;
  std::size_t char_end = 0;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;  // one past the last token

  friend bool operator==(const Span&, const Span&) = default;
};

// An (article)(color)(asset type) match, e.g. "the black coat".
struct VisualAttributeMention {
  std::string article;
  std::string color;       // canonical lexicon value ("red, white")
  std::string asset_type;
  Span span;
  MentionSource source;

  friend bool operator==(const VisualAttributeMention&,
                         const VisualAttributeMention&) = default;
};

// A preposition-led locating phrase, e.g. "in the second row of the third
// compartment in the leftmost cupboard". surface_text excludes the
// terminating punctuation/conjunction token.
struct SpatialDescriptionMention {
  std::string lead_prep;
  std::string surface_text;
  Span span;
  MentionSource source;

  friend bool operator==(const SpatialDescriptionMention&,
                         const SpatialDescriptionMention&) = default;
};

// The (relation, background item) sequence parsed out of one spatial
// description, in surface order.
struct ParsedSpatialChain {
  std::vector<std::pair<std::string, std::string>> steps;
  std::string surface_text;

  friend bool operator==(const ParsedSpatialChain&,
                         const ParsedSpatialChain&) = default;
};

// A visual-attribute mention resolved to a unique asset of its scene,
// optionally carrying the spatial chain that followed it in the utterance.
struct AlignedMention {
  std::string asset_id;
  std::string scene_id;
  std::string color;
  std::string asset_type;
  std::optional<ParsedSpatialChain> spatial_chain;
  std::optional<Rect> bbox;
  MentionSource source;

  friend bool operator==(const AlignedMention&, const AlignedMention&) =
      default;
};

// Extraction/alignment counters, reported per corpus by the CLI.
struct ExtractionStats {
  long va_mentions = 0;
  long sd_mentions = 0;
  long chains_parsed = 0;
  long chains_without_background = 0;  // discarded by the no-item rule
  long aligned = 0;
  long ambiguous = 0;    // two or more assets share (color, type)
  long unmatched = 0;    // no asset matches (color, type)
  long chains_paired = 0;
  long chains_unpaired = 0;  // no visual attribute within the window
};

// All non-overlapping visual-attribute matches, left to right, longest
// color/type alternative first. Never fails; no match means empty.
std::vector<VisualAttributeMention> extract_visual_attributes(
    const NormalizedText& text, const Matchers& matchers);

// All spatial-description matches. A description starts at a positional
// preposition followed by an article and runs (lazily) to the first
// punctuation/conjunction token; end of input counts as a terminator.
std::vector<SpatialDescriptionMention> extract_spatial_descriptions(
    const NormalizedText& text, const Matchers& matchers);

// Pairs the i-th relation with the i-th background item found inside the
// description. Returns nullopt when the description contains no background
// item; the caller drops the mention and counts it.
std::optional<ParsedSpatialChain> parse_spatial_chain(
    const SpatialDescriptionMention& mention, const Matchers& matchers);

struct AlignOptions {
  // A chain pairs with a visual-attribute mention when it starts at most
  // this many tokens after the mention ends.
  int adjacency_window = 2;
};

// One parsed chain still carrying the span of the description it came from,
// so alignment can test adjacency against visual-attribute spans.
struct LocatedChain {
  ParsedSpatialChain chain;
  Span span;
};

// Resolves mentions against the scene's asset records by exact
// (color, asset_type) match. Ambiguous or unmatched mentions are skipped
// and counted. Chains pair only forward, each with the nearest preceding
// mention inside the adjacency window.
std::vector<AlignedMention> align(
    const std::vector<VisualAttributeMention>& mentions,
    const std::vector<LocatedChain>& chains, const Corpus& corpus,
    const std::string& scene_id, const AlignOptions& options = {},
    ExtractionStats* stats = nullptr);

// Heuristic response tagger: `visual` when the response carries a
// visual-attribute mention, `spatial` when it carries a chain-parsable
// spatial description.
enum class SubsetFlag { kVisual, kSpatial };
std::set<SubsetFlag> tag_subset(const std::string& response,
                                const Matchers& matchers);

// Runs the full per-utterance pass (normalize, extract, parse chains) and
// returns mentions plus located chains ready for alignment.
struct UtteranceExtraction {
  std::vector<VisualAttributeMention> mentions;
  std::vector<LocatedChain> chains;
};
UtteranceExtraction extract_utterance(const std::string& raw,
                                      const MentionSource& source,
                                      const Matchers& matchers,
                                      ExtractionStats* stats = nullptr);

}  // namespace ilgqa

#endif  // ILGQA_EXTRACTION_HPP_
