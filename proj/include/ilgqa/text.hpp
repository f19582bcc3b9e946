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

#ifndef ILGQA_TEXT_HPP_
#define ILGQA_TEXT_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace ilgqa {

// One whitespace-delimited token of a normalized utterance. Offsets index
// into NormalizedText::text.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last character

  friend bool operator==(const Token&, const Token&) = default;
};

// An utterance after matching normalization: lowercased, punctuation split
// into its own tokens, whitespace collapsed to single spaces. All char spans
// reported by the extractors refer to `text`.
struct NormalizedText {
  std::string text;
  std::vector<Token> tokens;

  friend bool operator==(const NormalizedText&, const NormalizedText&) =
      default;
};

// Lowercases ASCII letters, puts a space on both sides of every ASCII
// punctuation character, and collapses whitespace runs. Bytes outside ASCII
// are passed through untouched, so arbitrary UTF-8 is safe.
NormalizedText normalize(const std::string& raw);

// Normalizes a lexicon entry or other short phrase to its token sequence.
std::vector<std::string> normalize_to_tokens(const std::string& raw);

// Joins tokens with single spaces.
std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace ilgqa

#endif  // ILGQA_TEXT_HPP_
