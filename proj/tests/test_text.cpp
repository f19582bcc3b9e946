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

#include "ilgqa/text.hpp"

using namespace ilgqa;

TEST_CASE("lowercases and collapses whitespace") {
  NormalizedText t = normalize("  How ABOUT   the Blue\tTshirt ");
  CHECK(t.text == "how about the blue tshirt");
  REQUIRE(t.tokens.size() == 5);
  CHECK(t.tokens[0].text == "how");
  CHECK(t.tokens[4].text == "tshirt");
}

TEST_CASE("punctuation becomes its own token") {
  NormalizedText t = normalize("red, white dress.");
  CHECK(t.text == "red , white dress .");
  REQUIRE(t.tokens.size() == 5);
  CHECK(t.tokens[1].text == ",");
  CHECK(t.tokens[4].text == ".");
}

TEST_CASE("token offsets index the normalized text") {
  NormalizedText t = normalize("A t-shirt, please");
  for (const Token& tok : t.tokens) {
    CHECK(t.text.substr(tok.begin, tok.end - tok.begin) == tok.text);
  }
  // Hyphen split: "t-shirt" -> t / - / shirt.
  REQUIRE(t.tokens.size() == 6);
  CHECK(t.tokens[1].text == "t");
  CHECK(t.tokens[2].text == "-");
  CHECK(t.tokens[3].text == "shirt");
}

TEST_CASE("empty and punctuation-only input") {
  CHECK(normalize("").text == "");
  CHECK(normalize("   ").tokens.empty());
  NormalizedText t = normalize("?!");
  CHECK(t.text == "? !");
  CHECK(t.tokens.size() == 2);
}

TEST_CASE("non-ascii bytes pass through untouched") {
  NormalizedText t = normalize("caf\xc3\xa9 SHELF");
  CHECK(t.text == "caf\xc3\xa9 shelf");
}

TEST_CASE("normalization is idempotent") {
  std::mt19937 rng(7);
  const std::string alphabet =
      "abcXYZ ,.!?-'  0123456789\t\xc3\xa9";
  for (int trial = 0; trial < 200; ++trial) {
    std::string raw;
    const int len = static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) {
      raw.push_back(alphabet[rng() % alphabet.size()]);
    }
    NormalizedText once = normalize(raw);
    CHECK(normalize(once.text) == once);
  }
}

TEST_CASE("normalize_to_tokens and join_tokens") {
  CHECK(normalize_to_tokens("Red, White") ==
        std::vector<std::string>{"red", ",", "white"});
  CHECK(join_tokens({"red", ",", "white"}) == "red , white");
  CHECK(join_tokens({}) == "");
}
