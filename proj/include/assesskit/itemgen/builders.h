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

#ifndef ASSESSKIT_ITEMGEN_BUILDERS_H_
#define ASSESSKIT_ITEMGEN_BUILDERS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "assesskit/itemgen/filter.h"
#include "assesskit/itemgen/provider.h"
#include "assesskit/itemgen/types.h"
#include "assesskit/text/embedding.h"
#include "assesskit/text/ngram.h"

namespace assesskit::itemgen {

struct PassageConstraints {
  Category category = Category::kExpository;
  int min_words = 80;
  int max_words = 120;
  int max_attempts = 5;
  int max_tokens = 400;
};

// Status payload key under which an exhausted generation attaches its last
// candidate text.
inline constexpr char kLastCandidatePayload[] = "assesskit/last-candidate";

// Attempt a uses seed for a = 0 and Mix64(seed + a) afterwards. After
// max_attempts out-of-range candidates the result is ResourceExhausted
// ("generation exhausted") with the last candidate attached.
absl::StatusOr<Passage> GeneratePassage(const LlmProvider& provider,
                                        const GenerationPrompt& prompt,
                                        const PassageConstraints& constraints, uint64_t seed,
                                        std::string passage_id);
std::optional<std::string> LastCandidate(const absl::Status& status);

struct ClozeParams {
  int blanks = 9;
  int min_gap = 5;
  // Percentile band of in-context token log-likelihood.
  double band_low = 0.30;
  double band_high = 0.70;
  double likelihood_weight = 1.0;
  double semantic_weight = 1.0;
  int min_tokens = 40;
  int distractors = 3;
};

struct ClozeCandidate {
  size_t index = 0;
  double log_prob = 0.0;
  double percentile = 0.0;
  double semantic = 0.0;
  double score = 0.0;
};

// Mid-rank percentile of each value among all values, in [0, 1]: (number
// strictly below + (ties - 1) / 2) / (n - 1). A single value gets 0.5.
std::vector<double> Percentiles(const std::vector<double>& values);

// Content-word positions inside the band, scored as
//   likelihood_weight * (1 - |p - mid| / half_width)
//   + semantic_weight * cosine(term vector, passage embedding)
// where the semantic term is 0 without a space or for unknown words.
std::vector<ClozeCandidate> ClozeCandidates(const std::vector<std::string>& tokens,
                                            const std::vector<double>& log_probs,
                                            const text::EmbeddingSpace* space,
                                            const std::vector<double>& passage_embedding,
                                            const ClozeParams& params);

// Greedy by (score desc, index asc), keeping |i - j| >= min_gap between all
// chosen positions. Returns positions in ascending order.
std::vector<size_t> SelectBlanks(const std::vector<ClozeCandidate>& candidates, int count,
                                 int min_gap);

// Vocabulary-in-context item. Distractors for a blank are the vocabulary
// content words with the highest conditional probability strictly below
// the key's, given the same preceding context.
absl::StatusOr<ItemDraft> BuildCloze(const Passage& passage, const text::NGramModel& lm,
                                     const text::EmbeddingSpace* space,
                                     const ClozeParams& params, uint64_t seed);

struct TextCompletionParams {
  int alternatives = 12;
  double similarity_floor = 0.0;
  double similarity_ceiling = 0.9;
};

// Index of the sentence with the highest mean token log-likelihood (tokens
// scored in passage context); ties go to the earlier sentence.
absl::StatusOr<size_t> MostPredictableSentence(std::string_view passage_text,
                                               const text::NGramModel& lm);

absl::StatusOr<ItemDraft> BuildTextCompletion(const Passage& passage,
                                              const text::NGramModel& lm,
                                              const LlmProvider& provider,
                                              const text::EmbeddingSpace& space,
                                              const TextCompletionParams& params,
                                              uint64_t seed);

struct ChoiceParams {
  // Passage-to-alternative embedding similarity band; both ends inclusive.
  double band_low = 0.05;
  double band_high = 0.95;
};

// Main-idea and possible-title drafts, in that order.
absl::StatusOr<std::vector<ItemDraft>> BuildChoiceItems(const Passage& passage,
                                                        const std::vector<Passage>& alternatives,
                                                        const LlmProvider& provider,
                                                        const text::EmbeddingSpace& space,
                                                        const ChoiceParams& params,
                                                        uint64_t seed);

struct ComprehensionResult {
  std::vector<ItemDraft> accepted;
  std::vector<std::pair<ItemDraft, std::string>> rejected;
};

// Parses {"question", "answer"} lines from the provider and filters them.
// Errors with "no viable items" when nothing survives.
absl::StatusOr<ComprehensionResult> BuildComprehension(const LlmProvider& provider,
                                                       const Passage& passage,
                                                       const FilterThresholds& thresholds,
                                                       const text::EmbeddingSpace* space,
                                                       int candidates, uint64_t seed);

}  // namespace assesskit::itemgen

#endif  // ASSESSKIT_ITEMGEN_BUILDERS_H_
