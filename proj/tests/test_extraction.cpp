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

#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "ilgqa/extraction.hpp"

using namespace ilgqa;

namespace {

const Matchers& fashion_matchers() {
  static const Matchers m = Matchers::compile(default_lexicon(Domain::kFashion));
  return m;
}

std::vector<std::tuple<std::string, std::string, std::string>> va_triples(
    const std::string& utterance) {
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  NormalizedText text = normalize(utterance);
  for (const auto& m : extract_visual_attributes(text, fashion_matchers())) {
    out.emplace_back(m.article, m.color, m.asset_type);
  }
  return out;
}

std::vector<std::string> sd_surfaces(const std::string& utterance) {
  std::vector<std::string> out;
  NormalizedText text = normalize(utterance);
  for (const auto& m :
       extract_spatial_descriptions(text, fashion_matchers())) {
    out.push_back(m.surface_text);
  }
  return out;
}

std::optional<ParsedSpatialChain> chain_of(const std::string& surface) {
  SpatialDescriptionMention m;
  m.surface_text = surface;
  NormalizedText t = normalize(surface);
  m.lead_prep = t.tokens.empty() ? "" : t.tokens.front().text;
  return parse_spatial_chain(m, fashion_matchers());
}

// A small scene: the unique black coat 16, a blue jacket, and two
// ambiguous white hats.
Corpus coat_corpus() {
  RawCorpus raw;
  raw.domain = Domain::kFashion;
  raw.scenes.push_back({"s1", "images/s1.png"});
  raw.assets.push_back({"16", "s1", "black", "coat", Rect{10, 20, 50, 90}});
  raw.assets.push_back({"17", "s1", "blue", "jacket", std::nullopt});
  raw.assets.push_back({"21", "s1", "white", "hat", std::nullopt});
  raw.assets.push_back({"22", "s1", "white", "hat", std::nullopt});
  return build_corpus(std::move(raw), default_lexicon(Domain::kFashion));
}

}  // namespace

TEST_CASE("visual attributes of the catalog sentence") {
  auto got = va_triples(
      "How about the blue tshirt on the shelf or the red jacket above the "
      "table ?");
  REQUIRE(got.size() == 2);
  CHECK(got[0] == std::make_tuple("the", "blue", "tshirt"));
  CHECK(got[1] == std::make_tuple("the", "red", "jacket"));
}

TEST_CASE("visual attribute with a pronoun article") {
  auto got = va_triples("i want that black coat");
  REQUIRE(got.size() == 1);
  CHECK(got[0] == std::make_tuple("that", "black", "coat"));
}

TEST_CASE("no visual attributes in empty or plain text") {
  CHECK(va_triples("").empty());
  CHECK(va_triples("do you have it in my size?").empty());
}

TEST_CASE("multi-word color values keep their commas") {
  auto got = va_triples("show me the red, white dress please");
  REQUIRE(got.size() == 1);
  CHECK(got[0] == std::make_tuple("the", "red, white", "dress"));
}

TEST_CASE("spatial descriptions of the catalog sentence") {
  auto got = sd_surfaces(
      "How about the blue tshirt on the shelf or the red jacket above the "
      "table ?");
  REQUIRE(got.size() == 2);
  CHECK(got[0] == "on the shelf");
  CHECK(got[1] == "above the table");
}

TEST_CASE("internal prepositions do not terminate a description") {
  auto got = sd_surfaces(
      "it is in the second row of the third compartment in the leftmost "
      "cupboard .");
  REQUIRE(got.size() == 1);
  CHECK(got[0] ==
        "in the second row of the third compartment in the leftmost "
        "cupboard");
}

TEST_CASE("end of utterance terminates like punctuation") {
  auto got = sd_surfaces("the coat is on the leftmost rack");
  REQUIRE(got.size() == 1);
  CHECK(got[0] == "on the leftmost rack");
}

TEST_CASE("no description without a preposition or article") {
  CHECK(sd_surfaces("hello there.").empty());
  // Preposition not followed by an article is not a description opener.
  CHECK(sd_surfaces("hand it over, please.").empty());
}

TEST_CASE("chain of a single-step description") {
  auto chain = chain_of("on the shelf");
  REQUIRE(chain.has_value());
  REQUIRE(chain->steps.size() == 1);
  CHECK(chain->steps[0] == std::make_pair(std::string("on"),
                                          std::string("shelf")));
  CHECK(chain->surface_text == "on the shelf");
}

TEST_CASE("chain of the three-step container description") {
  auto chain = chain_of(
      "in the second row of the third compartment in the leftmost cupboard");
  REQUIRE(chain.has_value());
  REQUIRE(chain->steps.size() == 3);
  CHECK(chain->steps[0].first == "in");
  CHECK(chain->steps[0].second == "second row");
  CHECK(chain->steps[1].first == "of");
  CHECK(chain->steps[1].second == "third compartment");
  CHECK(chain->steps[2].first == "in");
  CHECK(chain->steps[2].second == "leftmost cupboard");
}

TEST_CASE("description without a background item yields no chain") {
  CHECK_FALSE(chain_of("behind me").has_value());
}

TEST_CASE("surplus items are dropped when relations run out") {
  // "near" is not a positional preposition, so only one relation exists
  // for two items; the chain truncates.
  auto chain = chain_of("on the floor rack near the entrance");
  REQUIRE(chain.has_value());
  REQUIRE(chain->steps.size() == 1);
  CHECK(chain->steps[0] == std::make_pair(std::string("on"),
                                          std::string("floor rack")));
}

TEST_CASE("alignment resolves the unique black coat") {
  Corpus corpus = coat_corpus();
  MentionSource src{"d1", 1, UtteranceField::kUser};
  UtteranceExtraction ex = extract_utterance(
      "i want that black coat in the second row", src, fashion_matchers());
  REQUIRE(ex.mentions.size() == 1);
  REQUIRE(ex.chains.size() == 1);

  ExtractionStats stats;
  auto aligned =
      align(ex.mentions, ex.chains, corpus, "s1", AlignOptions{}, &stats);
  REQUIRE(aligned.size() == 1);
  CHECK(aligned[0].asset_id == "16");
  CHECK(aligned[0].color == "black");
  CHECK(aligned[0].asset_type == "coat");
  REQUIRE(aligned[0].bbox.has_value());
  CHECK(*aligned[0].bbox == Rect{10, 20, 50, 90});
  REQUIRE(aligned[0].spatial_chain.has_value());
  CHECK(aligned[0].spatial_chain->steps.size() == 1);
  CHECK(aligned[0].spatial_chain->steps[0].second == "second row");
  CHECK(stats.aligned == 1);
  CHECK(stats.chains_paired == 1);
}

TEST_CASE("ambiguous and unmatched mentions are skipped and counted") {
  Corpus corpus = coat_corpus();
  MentionSource src{"d1", 1, UtteranceField::kSystem};
  UtteranceExtraction ex = extract_utterance(
      "how about the white hat or the green dress?", src, fashion_matchers());
  REQUIRE(ex.mentions.size() == 2);

  ExtractionStats stats;
  auto aligned =
      align(ex.mentions, ex.chains, corpus, "s1", AlignOptions{}, &stats);
  CHECK(aligned.empty());
  CHECK(stats.ambiguous == 1);   // two white hats
  CHECK(stats.unmatched == 1);   // no green dress
}

TEST_CASE("a distant chain stays unpaired") {
  Corpus corpus = coat_corpus();
  MentionSource src{"d1", 1, UtteranceField::kUser};
  UtteranceExtraction ex = extract_utterance(
      "that black coat is hanging nicely in the second row", src,
      fashion_matchers());
  REQUIRE(ex.mentions.size() == 1);
  REQUIRE(ex.chains.size() == 1);

  ExtractionStats stats;
  auto aligned =
      align(ex.mentions, ex.chains, corpus, "s1", AlignOptions{}, &stats);
  REQUIRE(aligned.size() == 1);
  CHECK_FALSE(aligned[0].spatial_chain.has_value());
  CHECK(stats.chains_paired == 0);
  CHECK(stats.chains_unpaired == 1);
}

TEST_CASE("each chain pairs with its nearest preceding mention") {
  Corpus corpus = coat_corpus();
  MentionSource src{"d1", 1, UtteranceField::kSystem};
  UtteranceExtraction ex = extract_utterance(
      "How about the black coat on the shelf or the blue jacket above the "
      "table ?",
      src, fashion_matchers());
  REQUIRE(ex.mentions.size() == 2);
  REQUIRE(ex.chains.size() == 2);

  auto aligned = align(ex.mentions, ex.chains, corpus, "s1");
  REQUIRE(aligned.size() == 2);
  CHECK(aligned[0].asset_id == "16");
  REQUIRE(aligned[0].spatial_chain.has_value());
  CHECK(aligned[0].spatial_chain->steps[0].second == "shelf");
  CHECK(aligned[1].asset_id == "17");
  REQUIRE(aligned[1].spatial_chain.has_value());
  CHECK(aligned[1].spatial_chain->steps[0].second == "table");
}

TEST_CASE("tag_subset flags") {
  const Matchers& m = fashion_matchers();
  auto both = tag_subset(
      "How about the blue tshirt on the shelf or the red jacket above the "
      "table ?",
      m);
  CHECK(both == std::set<SubsetFlag>{SubsetFlag::kVisual,
                                     SubsetFlag::kSpatial});
  CHECK(tag_subset("sure, added to your cart.", m).empty());
  CHECK(tag_subset("it is on the leftmost rack.", m) ==
        std::set<SubsetFlag>{SubsetFlag::kSpatial});
}

TEST_CASE("extractors never fail on arbitrary bytes") {
  std::mt19937 rng(99);
  const Matchers& m = fashion_matchers();
  for (int trial = 0; trial < 300; ++trial) {
    std::string raw;
    const int len = static_cast<int>(rng() % 60);
    for (int i = 0; i < len; ++i) {
      raw.push_back(static_cast<char>(rng() % 256));
    }
    NormalizedText text = normalize(raw);
    CHECK_NOTHROW(extract_visual_attributes(text, m));
    CHECK_NOTHROW(extract_spatial_descriptions(text, m));
    CHECK_NOTHROW(tag_subset(raw, m));
  }
}

namespace {

// Independent reference extractor: raw token-by-token search over the
// lexicon tables, no SlotMatcher involved. Mirrors the scan-and-consume,
// longest-alternative contract.
std::vector<std::tuple<std::string, std::string, std::string>> reference_va(
    const std::string& utterance, const Lexicon& lex) {
  auto tokens = normalize_to_tokens(utterance);
  auto longest_at = [&](const std::vector<std::string>& values,
                        std::size_t pos) {
    const std::string* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& v : values) {
      auto vt = normalize_to_tokens(v);
      if (pos + vt.size() > tokens.size() || vt.empty()) continue;
      bool ok = true;
      for (std::size_t i = 0; i < vt.size(); ++i) {
        if (tokens[pos + i] != vt[i]) ok = false;
      }
      if (!ok) continue;
      if (!best || vt.size() > best_len ||
          (vt.size() == best_len && v.size() > best->size())) {
        best = &v;
        best_len = vt.size();
      }
    }
    return std::make_pair(best, best_len);
  };

  std::vector<std::tuple<std::string, std::string, std::string>> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    auto [art, art_len] = longest_at(lex.articles_pronouns, i);
    if (art) {
      auto [color, color_len] = longest_at(lex.colors, i + art_len);
      if (color) {
        auto [type, type_len] =
            longest_at(lex.asset_types, i + art_len + color_len);
        if (type) {
          out.emplace_back(*art, *color, *type);
          i += art_len + color_len + type_len;
          continue;
        }
      }
    }
    ++i;
  }
  return out;
}

std::string random_utterance(std::mt19937& rng, const Lexicon& lex) {
  static const std::vector<std::string> filler = {
      "how", "about", "i", "want", "is", "it", "available", "nice", "very",
      "show", "me", "size", "medium", "please"};
  std::string out;
  const int words = 3 + static_cast<int>(rng() % 12);
  for (int w = 0; w < words; ++w) {
    if (!out.empty()) out.push_back(' ');
    switch (rng() % 6) {
      case 0:
        out += lex.articles_pronouns[rng() % lex.articles_pronouns.size()];
        break;
      case 1:
        out += lex.colors[rng() % lex.colors.size()];
        break;
      case 2:
        out += lex.asset_types[rng() % lex.asset_types.size()];
        break;
      case 3:
        out += lex.punct_conj[rng() % lex.punct_conj.size()];
        break;
      default:
        out += filler[rng() % filler.size()];
        break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("extractor agrees with the reference implementation") {
  Lexicon lex = default_lexicon(Domain::kFashion);
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    std::string utterance = random_utterance(rng, lex);
    CAPTURE(utterance);
    CHECK(va_triples(utterance) == reference_va(utterance, lex));
  }
}
