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

#ifndef ASSESSKIT_FEATURES_EXTRACTORS_H_
#define ASSESSKIT_FEATURES_EXTRACTORS_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/common/demographics.h"
#include "assesskit/features/cefr.h"
#include "assesskit/features/feature_vector.h"
#include "assesskit/features/grammar.h"
#include "assesskit/text/embedding.h"
#include "assesskit/text/idf.h"
#include "assesskit/text/ngram.h"

namespace assesskit::features {

// Writing Sample timing: 30 s preparation, 5 min writing.
inline constexpr int kMaxPrepSeconds = 30;
inline constexpr int kMaxWriteSeconds = 300;

struct WritingResponse {
  std::string response_id;
  std::string prompt_id;
  std::string text;
  int prep_seconds = 0;
  int write_seconds = 0;
  std::optional<DemographicRecord> demographics;
};

// Low- and high-proficiency reference language models for differential word
// use.
struct DwuModels {
  const text::NGramModel* low = nullptr;
  const text::NGramModel* high = nullptr;
};

struct FeatureResources {
  const text::IdfTable* idf = nullptr;
  const text::EmbeddingSpace* space = nullptr;
  const CefrWordlist* wordlist = nullptr;
  DwuModels dwu;
  const DepthProvider* depth_provider = nullptr;
  std::vector<GrammarRule> rules;
};

// Cosine between the IDF-weighted token-count vectors of prompt and
// response. One feature, in [0, 1].
FeatureVector ContentFeatures(std::string_view prompt_text,
                              std::string_view response_text,
                              const text::IdfTable& idf);

// Over adjacent sentence pairs:
//   coherence_sentence_overlap   mean Jaccard of content-word sets
//   coherence_coreference_count  anaphoric pronouns in every sentence after
//                                the first, plus content words repeated from
//                                the previous sentence (a stand-in for noun
//                                heads referring across the boundary)
//   coherence_lsa_mean/min       mean and minimum embedding cosine
// A response with fewer than two sentences gets zeros.
FeatureVector CoherenceFeatures(std::string_view response_text,
                                const text::EmbeddingSpace& space);

// Proportion of tokens per CEFR level plus unlisted tokens, and the mean
// per-token log-odds log P_high - log P_low.
absl::StatusOr<FeatureVector> LexisFeatures(std::string_view response_text,
                                            const CefrWordlist& wordlist,
                                            const DwuModels& dwu);

// Mean and max sentence depth, and one error rate (distinct matched token
// positions / token count) per error type of the configured rules.
FeatureVector GrammarFeatures(std::string_view response_text,
                              const DepthProvider& depth_provider,
                              std::span<const GrammarRule> rules);

// Fixed feature order for a rule set.
std::vector<std::pair<std::string, Subconstruct>> FeatureSchema(
    std::span<const GrammarRule> rules);

// Union of the four families in schema order.
absl::StatusOr<FeatureVector> ExtractAll(std::string_view prompt_text,
                                         std::string_view response_text,
                                         const FeatureResources& resources);

}  // namespace assesskit::features

#endif  // ASSESSKIT_FEATURES_EXTRACTORS_H_
