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

#ifndef ASSESSKIT_ITEMGEN_FILTER_H_
#define ASSESSKIT_ITEMGEN_FILTER_H_

#include <string>
#include <string_view>

#include "assesskit/itemgen/types.h"
#include "assesskit/text/embedding.h"

namespace assesskit::itemgen {

// Token bounds are inclusive. Stem bounds do not apply to cloze and text
// completion items, whose stem is the whole passage.
struct FilterThresholds {
  int min_stem_tokens = 3;
  int max_stem_tokens = 60;
  int min_option_tokens = 1;
  int max_option_tokens = 25;
  // Cosine between the stem plus key and the passage.
  double min_alignment = 0.05;
  bool reject_duplicates = true;
};

struct FilterDecision {
  bool accepted = true;
  // Empty when accepted; otherwise the first violated rule, one of
  // key-count, stem-too-short, stem-too-long, option-too-short,
  // option-too-long, duplicate-option, answer-not-in-passage,
  // poor-alignment.
  std::string reason;
};

// Rules are checked in the order listed above. Alignment is skipped when
// space is null.
FilterDecision FilterItem(const ItemDraft& draft, std::string_view passage_text,
                          const FilterThresholds& thresholds,
                          const text::EmbeddingSpace* space);

}  // namespace assesskit::itemgen

#endif  // ASSESSKIT_ITEMGEN_FILTER_H_
