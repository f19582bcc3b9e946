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

#include "ilgqa/text.hpp"

#include <cctype>

namespace ilgqa {

namespace {

bool is_ascii_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_ascii_punct(unsigned char c) { return c < 128 && std::ispunct(c); }

}  // namespace

NormalizedText normalize(const std::string& raw) {
  std::string spaced;
  spaced.reserve(raw.size() + 8);
  for (unsigned char c : raw) {
    if (is_ascii_space(c)) {
      spaced.push_back(' ');
    } else if (is_ascii_punct(c)) {
      spaced.push_back(' ');
      spaced.push_back(static_cast<char>(c));
      spaced.push_back(' ');
    } else if (c < 128) {
      spaced.push_back(static_cast<char>(std::tolower(c)));
    } else {
      spaced.push_back(static_cast<char>(c));
    }
  }

  NormalizedText out;
  out.text.reserve(spaced.size());
  std::size_t token_begin = 0;
  bool in_token = false;
  for (char c : spaced) {
    if (c == ' ') {
      if (in_token) {
        out.tokens.push_back({out.text.substr(token_begin), token_begin,
                              out.text.size()});
        in_token = false;
      }
      continue;
    }
    if (!in_token) {
      if (!out.text.empty()) out.text.push_back(' ');
      token_begin = out.text.size();
      in_token = true;
    }
    out.text.push_back(c);
  }
  if (in_token) {
    out.tokens.push_back(
        {out.text.substr(token_begin), token_begin, out.text.size()});
  }
  return out;
}

std::vector<std::string> normalize_to_tokens(const std::string& raw) {
  std::vector<std::string> tokens;
  for (auto& t : normalize(raw).tokens) tokens.push_back(std::move(t.text));
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace ilgqa
