/*
 * Copyright 2026 The AssessKit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "assesskit/itemgen/filter.h"

#include <set>

#include "assesskit/common/strings.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::itemgen {
namespace {

FilterDecision Reject(std::string reason) { return {false, std::move(reason)}; }

int TokenCount(std::string_view s) { return static_cast<int>(text::Tokenize(s).size()); }

std::string DuplicateKey(std::string_view option) {
  return text::AsciiLower(Trim(option));
}

bool HasDuplicates(const std::vector<ItemOption>& options) {
  std::set<std::string> seen;
  for (const auto& o : options) {
    if (!seen.insert(DuplicateKey(o.text)).second) return true;
  }
  return false;
}

}  // namespace

FilterDecision FilterItem(const ItemDraft& draft, std::string_view passage_text,
                          const FilterThresholds& t, const text::EmbeddingSpace* space) {
  if (!CheckKeyCount(draft).ok()) return Reject("key-count");
  const bool cloze = draft.kind == ItemKind::kVocabularyInContext;
  // Cloze and text-completion stems are the passage itself.
  if (!cloze && draft.kind != ItemKind::kTextCompletion) {
    const int stem = TokenCount(draft.stem);
    if (stem < t.min_stem_tokens) return Reject("stem-too-short");
    if (stem > t.max_stem_tokens) return Reject("stem-too-long");
  }
  std::vector<const std::vector<ItemOption>*> groups;
  if (cloze) {
    for (const auto& b : draft.blanks) groups.push_back(&b.options);
  } else {
    groups.push_back(&draft.options);
  }
  for (const auto* group : groups) {
    for (const auto& o : *group) {
      if (TokenCount(o.text) < t.min_option_tokens) return Reject("option-too-short");
    }
  }
  for (const auto* group : groups) {
    for (const auto& o : *group) {
      if (TokenCount(o.text) > t.max_option_tokens) return Reject("option-too-long");
    }
  }
  if (t.reject_duplicates) {
    for (const auto* group : groups) {
      if (HasDuplicates(*group)) return Reject("duplicate-option");
    }
  }
  if (draft.kind == ItemKind::kComprehension) {
    for (const auto& o : draft.options) {
      if (o.correct && passage_text.find(o.text) == std::string_view::npos) {
        return Reject("answer-not-in-passage");
      }
    }
  }
  if (space != nullptr && !cloze) {
    std::string keyed;
    for (const auto& o : draft.options) {
      if (o.correct) keyed = o.text;
    }
    const double alignment = text::Cosine(space->Embed(StrCat(draft.stem, " ", keyed)),
                                          space->Embed(passage_text));
    if (alignment < t.min_alignment) return Reject("poor-alignment");
  }
  return {};
}

}  // namespace assesskit::itemgen
