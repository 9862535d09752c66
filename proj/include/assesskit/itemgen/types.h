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

#ifndef ASSESSKIT_ITEMGEN_TYPES_H_
#define ASSESSKIT_ITEMGEN_TYPES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/text/tokenizer.h"
#include "json.hpp"

namespace assesskit::itemgen {

enum class Category { kExpository, kNarrative };
enum class ItemKind {
  kVocabularyInContext,
  kTextCompletion,
  kComprehension,
  kMainIdea,
  kPossibleTitle,
};

std::string_view CategoryName(Category category);
std::string_view ItemKindName(ItemKind kind);
absl::StatusOr<Category> ParseCategory(std::string_view name);
absl::StatusOr<ItemKind> ParseItemKind(std::string_view name);

struct Target {
  Category category = Category::kExpository;
  std::string topic;
};

struct Exemplar {
  Category category = Category::kExpository;
  std::string text;
};

struct GenerationPrompt {
  std::string template_id;
  std::vector<Exemplar> exemplars;
  Target target;
  std::string rendered;
};

struct Provenance {
  std::string provider_id;
  std::string prompt_id;
  uint64_t seed = 0;
};

struct Passage {
  std::string passage_id;
  std::string text;
  Category category = Category::kExpository;
  std::string topic;
  Provenance provenance;
};

struct ItemOption {
  std::string text;
  bool correct = false;
  // Diagnostics. Unset when the builder has no such measurement.
  std::optional<double> similarity;
  std::optional<double> log_prob;
};

// One elided word of a vocabulary-in-context item.
struct ClozeBlank {
  size_t token_index = 0;
  text::CharSpan span;
  std::vector<ItemOption> options;
};

struct ItemDraft {
  std::string item_id;
  std::string passage_id;
  ItemKind kind = ItemKind::kComprehension;
  std::string stem;
  // Selected-response options; for comprehension a single keyed answer.
  std::vector<ItemOption> options;
  // Vocabulary-in-context only: the blanks, each with its own options.
  std::vector<ClozeBlank> blanks;
  // Comprehension only: where the keyed answer sits in the passage.
  std::optional<text::CharSpan> answer_span;
  nlohmann::json diagnostics = nlohmann::json::object();
};

// Exactly one keyed option per question (per blank for cloze).
absl::Status CheckKeyCount(const ItemDraft& draft);

nlohmann::json ToJson(const Passage& passage);
nlohmann::json ToJson(const ItemDraft& draft);
absl::StatusOr<Passage> PassageFromJson(const nlohmann::json& json);
absl::StatusOr<ItemDraft> DraftFromJson(const nlohmann::json& json);

}  // namespace assesskit::itemgen

#endif  // ASSESSKIT_ITEMGEN_TYPES_H_
