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

#ifndef ILGQA_LEXICON_HPP_
#define ILGQA_LEXICON_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ilgqa/text.hpp"

namespace ilgqa {

enum class Domain { kFashion, kFurniture };

Domain parse_domain(const std::string& name);  // "fashion" | "furniture"
std::string to_string(Domain domain);

// Slot-value tables driving the four matchers. Colors and asset types are
// per-domain; the remaining slots are shared. All entries are lowercase,
// single-spaced and unique within their list.
struct Lexicon {
  std::vector<std::string> colors;
  std::vector<std::string> asset_types;
  std::vector<std::string> background_items;
  std::vector<std::string> positional_preps;
  std::vector<std::string> articles_pronouns;
  std::vector<std::string> punct_conj;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

// Built-in tables for a domain, including the background-item extension set
// (row, compartment, entrance, floor rack) that the stock head-noun list is
// missing for container phrases like "second row".
Lexicon default_lexicon(Domain domain);

// Throws InputError if any entry is empty, not lowercase/single-spaced, or
// duplicated within its list.
void validate_lexicon(const Lexicon& lexicon);

// Reads a JSON object mapping slot names ("colors", "asset_types",
// "background_items", "positional_preps", "articles_pronouns", "punct_conj")
// to string lists. Slots present in the file replace the corresponding list
// of `base`; absent slots keep the base values.
Lexicon load_lexicon_override(const std::filesystem::path& path,
                              const Lexicon& base);

enum class MatcherKind {
  kVisualAttribute,    // (article)(color)(asset type)
  kSpatialDescription, // (prep)(article)(lazy filler)(punct/conj)
  kBackgroundItem,     // (modifiers?)(background item)
  kSpatialRelation,    // (prep)
};

// One slot alternative: the canonical lexicon value plus its normalized
// token sequence ("red, white" -> {"red", ",", "white"}).
struct SlotValue {
  std::string value;
  std::vector<std::string> tokens;
};

// Alternatives of one slot, ordered longest first (token count, then
// character length) so the longest applicable value always wins regardless
// of the order entries appear in the lexicon.
class SlotMatcher {
 public:
  SlotMatcher() = default;
  SlotMatcher(std::string slot_name, const std::vector<std::string>& values);

  // Longest alternative whose token sequence equals tokens[pos...]; nullptr
  // if none matches. Matching is whole-token: "the" never matches inside
  // "thematic" because "thematic" is a single token.
  const SlotValue* match(const std::vector<Token>& tokens,
                         std::size_t pos) const;

  // Single-token membership, for slots whose values are all one token.
  bool contains(const std::string& token) const;

  const std::string& name() const { return name_; }
  const std::vector<SlotValue>& values() const { return values_; }

 private:
  std::string name_;
  std::vector<SlotValue> values_;  // longest first
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_token_;
  std::unordered_set<std::string> single_tokens_;
};

struct CompileOptions {
  // How many non-article, non-preposition, non-punctuation tokens directly
  // before a background head noun are folded into the item label
  // ("second row", "leftmost cupboard").
  int background_modifier_limit = 2;
};

// The four compiled matchers of one lexicon. Immutable after compile; safe
// for unrestricted concurrent use.
class Matchers {
 public:
  static Matchers compile(const Lexicon& lexicon, CompileOptions options = {});

  const SlotMatcher& colors() const { return colors_; }
  const SlotMatcher& asset_types() const { return asset_types_; }
  const SlotMatcher& background_items() const { return background_items_; }
  const SlotMatcher& positional_preps() const { return positional_preps_; }
  const SlotMatcher& articles_pronouns() const { return articles_pronouns_; }
  const SlotMatcher& punct_conj() const { return punct_conj_; }
  const CompileOptions& options() const { return options_; }

 private:
  SlotMatcher colors_;
  SlotMatcher asset_types_;
  SlotMatcher background_items_;
  SlotMatcher positional_preps_;
  SlotMatcher articles_pronouns_;
  SlotMatcher punct_conj_;
  CompileOptions options_;
};

}  // namespace ilgqa

#endif  // ILGQA_LEXICON_HPP_
