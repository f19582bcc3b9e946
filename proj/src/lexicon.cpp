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

#include "ilgqa/lexicon.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "ilgqa/errors.hpp"

namespace ilgqa {

namespace {

const std::vector<std::string> kFashionColors = {
    "red, white, yellow", "red, white", "purple", "white, black", "black",
    "dark grey", "grey, black", "brown", "dark green", "grey", "dark blue",
    "blue, white", "grey, brown", "white, blue", "yellow, white",
    "dark green, dark blue", "light grey", "white", "blue", "green", "maroon",
    "yellow", "red", "violet", "black, red, white", "yellow, black",
    "blue, black", "black, white", "light blue", "red, black", "pink, white",
    "orange", "yellow, brown", "light pink", "dark brown", "pink",
    "dark yellow", "light red", "green, white", "grey, white", "black, red",
    "grey, blue", "brown, white", "white, black, red", "beige", "light orange",
    "orange, purple", "dirty green", "blue, grey", "black, grey",
    "white, grey", "olive", "dark red", "olive, black", "pink, black",
    "blue, green", "green, black", "light blue, light green",
    "dark pink, white", "dirty grey", "dark pink", "red, grey", "dark violet",
    "olive, white", "black, orange", "golden", "maroon, white, blue",
    "green, violet, pink", "white, red, violet", "brown, black",
    "black, olive"};

const std::vector<std::string> kFashionTypes = {
    "blouse", "jacket", "shirt",    "sweater", "dress", "tshirt",
    "joggers", "jeans",  "hat",      "tank top", "vest", "coat",
    "shoes",   "skirt",  "suit",     "trousers", "hoodie"};

const std::vector<std::string> kFurnitureColors = {
    "red",   "blue",  "white",           "grey",  "brown",
    "green", "black", "black and white", "wooden"};

const std::vector<std::string> kFurnitureTypes = {
    "area rug", "bed",  "chair",   "coffee table", "couch chair",
    "end table", "lamp", "shelves", "sofa",         "table"};

const std::vector<std::string> kBackgroundItems = {
    "rack",     "wall",     "mirror",     "shelf",        "closet",
    "table",    "wardrobe", "cabinet",    "window",       "divider",
    "door",     "counter",  "cubby",      "cubbies",      "hanger",
    "stand",    "cupboard", "mannequin",  "shoe boxes",   "room divider",
    "wall divider",
    // Extension set: head nouns the stock list lacks but container phrases
    // like "second row of the third compartment" depend on.
    "row", "compartment", "entrance", "floor rack"};

const std::vector<std::string> kPositionalPreps = {
    "in",      "on", "at",      "behind", "toward", "to",
    "against", "of", "along",   "below",  "towards", "above"};

const std::vector<std::string> kArticlesPronouns = {"the",  "a",     "that",
                                                    "this", "other", "another"};

const std::vector<std::string> kPunctConj = {",", ".", ";", "?", "and", "or"};

void validate_slot(const std::string& slot,
                   const std::vector<std::string>& values) {
  std::unordered_set<std::string> seen;
  for (const auto& v : values) {
    if (v.empty()) {
      throw InputError("lexicon slot '" + slot + "' contains an empty entry");
    }
    std::string canonical = join_tokens(normalize_to_tokens(v));
    // Entries must be pre-normalized; matching reuses them verbatim as
    // canonical output values.
    std::string lowered = v;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lowered != v) {
      throw InputError("lexicon slot '" + slot + "' entry '" + v +
                       "' is not lowercase");
    }
    if (v.find("  ") != std::string::npos || v.front() == ' ' ||
        v.back() == ' ') {
      throw InputError("lexicon slot '" + slot + "' entry '" + v +
                       "' is not single-spaced");
    }
    if (!seen.insert(v).second) {
      throw InputError("lexicon slot '" + slot + "' entry '" + v +
                       "' is duplicated");
    }
  }
}

}  // namespace

Domain parse_domain(const std::string& name) {
  if (name == "fashion") return Domain::kFashion;
  if (name == "furniture") return Domain::kFurniture;
  throw InputError("unknown domain '" + name +
                   "' (expected 'fashion' or 'furniture')");
}

std::string to_string(Domain domain) {
  return domain == Domain::kFashion ? "fashion" : "furniture";
}

Lexicon default_lexicon(Domain domain) {
  Lexicon lex;
  if (domain == Domain::kFashion) {
    lex.colors = kFashionColors;
    lex.asset_types = kFashionTypes;
  } else {
    lex.colors = kFurnitureColors;
    lex.asset_types = kFurnitureTypes;
  }
  lex.background_items = kBackgroundItems;
  lex.positional_preps = kPositionalPreps;
  lex.articles_pronouns = kArticlesPronouns;
  lex.punct_conj = kPunctConj;
  return lex;
}

void validate_lexicon(const Lexicon& lexicon) {
  validate_slot("colors", lexicon.colors);
  validate_slot("asset_types", lexicon.asset_types);
  validate_slot("background_items", lexicon.background_items);
  validate_slot("positional_preps", lexicon.positional_preps);
  validate_slot("articles_pronouns", lexicon.articles_pronouns);
  validate_slot("punct_conj", lexicon.punct_conj);
}

Lexicon load_lexicon_override(const std::filesystem::path& path,
                              const Lexicon& base) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open lexicon file '" + path.string() + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("lexicon file '" + path.string() +
                     "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) {
    throw InputError("lexicon file '" + path.string() +
                     "' must be a JSON object");
  }

  Lexicon lex = base;
  auto apply = [&](const char* key, std::vector<std::string>& slot) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    if (!v.is_array()) {
      throw InputError("lexicon file '" + path.string() + "' key '" + key +
                       "' must be a list of strings");
    }
    slot.clear();
    for (const auto& item : v) {
      if (!item.is_string()) {
        throw InputError("lexicon file '" + path.string() + "' key '" + key +
                         "' must be a list of strings");
      }
      slot.push_back(item.get<std::string>());
    }
  };
  apply("colors", lex.colors);
  apply("asset_types", lex.asset_types);
  apply("background_items", lex.background_items);
  apply("positional_preps", lex.positional_preps);
  apply("articles_pronouns", lex.articles_pronouns);
  apply("punct_conj", lex.punct_conj);

  for (const auto& [key, value] : doc.items()) {
    static const std::unordered_set<std::string> known = {
        "colors",           "asset_types",      "background_items",
        "positional_preps", "articles_pronouns", "punct_conj"};
    if (!known.count(key)) {
      throw InputError("lexicon file '" + path.string() +
                       "' has unknown slot '" + key + "'");
    }
  }

  validate_lexicon(lex);
  return lex;
}

SlotMatcher::SlotMatcher(std::string slot_name,
                         const std::vector<std::string>& values)
    : name_(std::move(slot_name)) {
  if (values.empty()) {
    throw InputError("cannot compile matcher: slot '" + name_ + "' is empty");
  }
  values_.reserve(values.size());
  for (const auto& v : values) {
    SlotValue sv;
    sv.value = v;
    sv.tokens = normalize_to_tokens(v);
    if (sv.tokens.empty()) {
      throw InputError("cannot compile matcher: slot '" + name_ +
                       "' entry '" + v + "' normalizes to nothing");
    }
    values_.push_back(std::move(sv));
  }
  // Longest first so a prefix value ("red") can never shadow a longer one
  // ("red, white"). Ties broken by character length, then value, to keep the
  // order independent of lexicon order.
  std::stable_sort(values_.begin(), values_.end(),
                   [](const SlotValue& a, const SlotValue& b) {
                     if (a.tokens.size() != b.tokens.size())
                       return a.tokens.size() > b.tokens.size();
                     if (a.value.size() != b.value.size())
                       return a.value.size() > b.value.size();
                     return a.value < b.value;
                   });
  for (std::size_t i = 0; i < values_.size(); ++i) {
    by_first_token_[values_[i].tokens.front()].push_back(i);
    if (values_[i].tokens.size() == 1) {
      single_tokens_.insert(values_[i].tokens.front());
    }
  }
}

const SlotValue* SlotMatcher::match(const std::vector<Token>& tokens,
                                    std::size_t pos) const {
  if (pos >= tokens.size()) return nullptr;
  auto it = by_first_token_.find(tokens[pos].text);
  if (it == by_first_token_.end()) return nullptr;
  for (std::size_t idx : it->second) {
    const SlotValue& sv = values_[idx];
    if (pos + sv.tokens.size() > tokens.size()) continue;
    bool ok = true;
    for (std::size_t j = 1; j < sv.tokens.size(); ++j) {
      if (tokens[pos + j].text != sv.tokens[j]) {
        ok = false;
        break;
      }
    }
    if (ok) return &sv;
  }
  return nullptr;
}

bool SlotMatcher::contains(const std::string& token) const {
  return single_tokens_.count(token) > 0;
}

Matchers Matchers::compile(const Lexicon& lexicon, CompileOptions options) {
  validate_lexicon(lexicon);
  Matchers m;
  m.colors_ = SlotMatcher("colors", lexicon.colors);
  m.asset_types_ = SlotMatcher("asset_types", lexicon.asset_types);
  m.background_items_ = SlotMatcher("background_items",
                                    lexicon.background_items);
  m.positional_preps_ = SlotMatcher("positional_preps",
                                    lexicon.positional_preps);
  m.articles_pronouns_ = SlotMatcher("articles_pronouns",
                                     lexicon.articles_pronouns);
  m.punct_conj_ = SlotMatcher("punct_conj", lexicon.punct_conj);
  m.options_ = options;
  return m;
}

}  // namespace ilgqa
