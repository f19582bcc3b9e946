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

#include "ilgqa/extraction.hpp"

#include <algorithm>

namespace ilgqa {

namespace {

Span make_span(const NormalizedText& text, std::size_t token_begin,
               std::size_t token_end) {
  Span s;
  s.token_begin = token_begin;
  s.token_end = token_end;
  s.char_begin = text.tokens[token_begin].begin;
  s.char_end = text.tokens[token_end - 1].end;
  return s;
}

}  // namespace

std::vector<VisualAttributeMention> extract_visual_attributes(
    const NormalizedText& text, const Matchers& matchers) {
  std::vector<VisualAttributeMention> out;
  const auto& tokens = text.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const SlotValue* article = matchers.articles_pronouns().match(tokens, i);
    if (!article) {
      ++i;
      continue;
    }
    std::size_t color_pos = i + article->tokens.size();
    const SlotValue* color = matchers.colors().match(tokens, color_pos);
    if (!color) {
      ++i;
      continue;
    }
    std::size_t type_pos = color_pos + color->tokens.size();
    const SlotValue* type = matchers.asset_types().match(tokens, type_pos);
    if (!type) {
      ++i;
      continue;
    }
    VisualAttributeMention m;
    m.article = article->value;
    m.color = color->value;
    m.asset_type = type->value;
    std::size_t end = type_pos + type->tokens.size();
    m.span = make_span(text, i, end);
    out.push_back(std::move(m));
    i = end;  // matches never overlap
  }
  return out;
}

std::vector<SpatialDescriptionMention> extract_spatial_descriptions(
    const NormalizedText& text, const Matchers& matchers) {
  std::vector<SpatialDescriptionMention> out;
  const auto& tokens = text.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!matchers.positional_preps().contains(tokens[i].text)) {
      ++i;
      continue;
    }
    std::size_t art_pos = i + 1;
    const SlotValue* article =
        matchers.articles_pronouns().match(tokens, art_pos);
    if (!article) {
      ++i;
      continue;
    }
    // Lazy filler: the description ends at the first punctuation or
    // conjunction token. Running off the end of the utterance terminates
    // too, as if a final "." had been appended.
    std::size_t filler_begin = art_pos + article->tokens.size();
    std::size_t term = filler_begin;
    while (term < tokens.size() &&
           !matchers.punct_conj().contains(tokens[term].text)) {
      ++term;
    }
    if (term == filler_begin) {  // empty filler is not a description
      ++i;
      continue;
    }
    SpatialDescriptionMention m;
    m.lead_prep = tokens[i].text;
    m.span = make_span(text, i, term);
    m.surface_text =
        text.text.substr(m.span.char_begin, m.span.char_end - m.span.char_begin);
    out.push_back(std::move(m));
    // Resume after the terminator, mirroring scan-and-consume matching.
    i = term < tokens.size() ? term + 1 : term;
  }
  return out;
}

std::optional<ParsedSpatialChain> parse_spatial_chain(
    const SpatialDescriptionMention& mention, const Matchers& matchers) {
  NormalizedText surface = normalize(mention.surface_text);
  const auto& tokens = surface.tokens;

  // Background items, with up to `background_modifier_limit` non-article,
  // non-preposition, non-punctuation tokens before the head noun folded in
  // ("second row", "leftmost cupboard").
  std::vector<std::string> items;
  const int modifier_limit = matchers.options().background_modifier_limit;
  std::size_t consumed_end = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const SlotValue* head = matchers.background_items().match(tokens, i);
    if (!head) {
      ++i;
      continue;
    }
    std::size_t first = i;
    for (int k = 0; k < modifier_limit; ++k) {
      if (first == consumed_end) break;
      const std::string& prev = tokens[first - 1].text;
      if (matchers.articles_pronouns().contains(prev) ||
          matchers.positional_preps().contains(prev) ||
          matchers.punct_conj().contains(prev)) {
        break;
      }
      --first;
    }
    std::vector<std::string> label_tokens;
    for (std::size_t j = first; j < i + head->tokens.size(); ++j) {
      label_tokens.push_back(tokens[j].text);
    }
    items.push_back(join_tokens(label_tokens));
    i += head->tokens.size();
    consumed_end = i;
  }
  if (items.empty()) return std::nullopt;

  // Relations, in surface order. Applied only inside the description span,
  // never to the whole utterance.
  std::vector<std::string> relations;
  for (const auto& t : tokens) {
    if (matchers.positional_preps().contains(t.text)) {
      relations.push_back(t.text);
    }
  }

  ParsedSpatialChain chain;
  chain.surface_text = mention.surface_text;
  std::size_t steps = std::min(relations.size(), items.size());
  for (std::size_t k = 0; k < steps; ++k) {
    chain.steps.emplace_back(relations[k], items[k]);
  }
  if (chain.steps.empty()) return std::nullopt;
  return chain;
}

std::vector<AlignedMention> align(
    const std::vector<VisualAttributeMention>& mentions,
    const std::vector<LocatedChain>& chains, const Corpus& corpus,
    const std::string& scene_id, const AlignOptions& options,
    ExtractionStats* stats) {
  // Each chain pairs with the nearest preceding mention that ends at most
  // `adjacency_window` tokens before it; each mention takes one chain.
  std::vector<const ParsedSpatialChain*> chain_for(mentions.size(), nullptr);
  for (const auto& located : chains) {
    // Mentions are in surface order, so the last qualifying one is the
    // nearest preceding mention. A chain never pairs backward and never
    // falls through to a farther mention.
    std::size_t best = mentions.size();
    for (std::size_t i = 0; i < mentions.size(); ++i) {
      const Span& ms = mentions[i].span;
      if (ms.token_end > located.span.token_begin) continue;
      std::size_t gap = located.span.token_begin - ms.token_end;
      if (gap > static_cast<std::size_t>(options.adjacency_window)) continue;
      best = i;
    }
    if (best < mentions.size() && chain_for[best] == nullptr) {
      chain_for[best] = &located.chain;
      if (stats) ++stats->chains_paired;
    } else if (stats) {
      ++stats->chains_unpaired;
    }
  }

  std::vector<AlignedMention> out;
  auto scene_assets = corpus.assets_in_scene(scene_id);
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const auto& m = mentions[i];
    const AssetRecord* found = nullptr;
    bool ambiguous = false;
    for (const AssetRecord* a : scene_assets) {
      if (a->color == m.color && a->asset_type == m.asset_type) {
        if (found) {
          ambiguous = true;
          break;
        }
        found = a;
      }
    }
    if (ambiguous) {
      if (stats) ++stats->ambiguous;
      continue;
    }
    if (!found) {
      if (stats) ++stats->unmatched;
      continue;
    }
    AlignedMention aligned;
    aligned.asset_id = found->asset_id;
    aligned.scene_id = scene_id;
    aligned.color = found->color;
    aligned.asset_type = found->asset_type;
    aligned.bbox = found->bbox;
    aligned.source = m.source;
    if (chain_for[i]) aligned.spatial_chain = *chain_for[i];
    out.push_back(std::move(aligned));
    if (stats) ++stats->aligned;
  }
  return out;
}

std::set<SubsetFlag> tag_subset(const std::string& response,
                                const Matchers& matchers) {
  std::set<SubsetFlag> flags;
  NormalizedText text = normalize(response);
  if (!extract_visual_attributes(text, matchers).empty()) {
    flags.insert(SubsetFlag::kVisual);
  }
  for (const auto& sd : extract_spatial_descriptions(text, matchers)) {
    if (parse_spatial_chain(sd, matchers)) {
      flags.insert(SubsetFlag::kSpatial);
      break;
    }
  }
  return flags;
}

UtteranceExtraction extract_utterance(const std::string& raw,
                                      const MentionSource& source,
                                      const Matchers& matchers,
                                      ExtractionStats* stats) {
  NormalizedText text = normalize(raw);
  UtteranceExtraction out;
  out.mentions = extract_visual_attributes(text, matchers);
  for (auto& m : out.mentions) m.source = source;
  if (stats) stats->va_mentions += static_cast<long>(out.mentions.size());

  auto descriptions = extract_spatial_descriptions(text, matchers);
  if (stats) stats->sd_mentions += static_cast<long>(descriptions.size());
  for (auto& sd : descriptions) {
    sd.source = source;
    if (auto chain = parse_spatial_chain(sd, matchers)) {
      out.chains.push_back({std::move(*chain), sd.span});
      if (stats) ++stats->chains_parsed;
    } else if (stats) {
      ++stats->chains_without_background;
    }
  }
  return out;
}

}  // namespace ilgqa
