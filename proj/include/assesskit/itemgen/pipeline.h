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

#ifndef ASSESSKIT_ITEMGEN_PIPELINE_H_
#define ASSESSKIT_ITEMGEN_PIPELINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/itemgen/builders.h"
#include "assesskit/itemgen/filter.h"
#include "assesskit/itemgen/prompt.h"
#include "assesskit/itemgen/provider.h"
#include "json.hpp"

namespace assesskit::itemgen {

struct BatchConfig {
  // One passage per target.
  std::vector<Target> targets;
  PassageConstraints constraints;  // category is taken from each target
  ClozeParams cloze;
  TextCompletionParams completion;
  ChoiceParams choice;
  FilterThresholds filter;
  int comprehension_candidates = 10;
  uint64_t seed = 1;
  std::string id_prefix = "p";
};

struct Rejection {
  std::string passage_id;
  std::string item_id;
  ItemKind kind = ItemKind::kComprehension;
  std::string reason;
};

// A passage or item kind that could not be built at all.
struct BuildFailure {
  std::string passage_id;
  std::string stage;
  std::string message;
};

struct BatchResult {
  std::vector<Passage> passages;
  std::vector<ItemDraft> accepted;
  std::vector<Rejection> rejected;
  std::vector<BuildFailure> failures;
};

// Builds all five item kinds from one passage and files each draft as
// accepted, rejected or failed in `result`.
void BuildItemsForPassage(const BatchConfig& config, const Passage& passage,
                          const std::vector<Passage>& alternatives, uint64_t seed,
                          const LlmProvider& provider, const text::NGramModel& lm,
                          const text::EmbeddingSpace& space, BatchResult& result);

// Generates every passage, then derives all five item kinds from each; the
// other passages of the batch are the alternative pool for choice items.
// Only drafts that pass FilterItem appear in accepted.
absl::StatusOr<BatchResult> RunBatch(const BatchConfig& config, const PromptTemplate& tmpl,
                                     const std::vector<Exemplar>& exemplars,
                                     const LlmProvider& provider, const text::NGramModel& lm,
                                     const text::EmbeddingSpace& space);

nlohmann::json ToJson(const BatchResult& result);

}  // namespace assesskit::itemgen

#endif  // ASSESSKIT_ITEMGEN_PIPELINE_H_
