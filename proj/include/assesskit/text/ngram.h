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

#ifndef ASSESSKIT_TEXT_NGRAM_H_
#define ASSESSKIT_TEXT_NGRAM_H_

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace assesskit::text {

inline constexpr std::string_view kSentenceStart = "<s>";

// Add-k smoothed n-gram model over word tokens.
//
//   P(w | ctx) = (c(ctx, w) + k) / (c(ctx) + k * (V + 1))
//
// V counts the distinct training tokens; the extra slot is the unknown token,
// so probabilities over vocabulary + {unknown} sum to one for every context.
// Each document is padded with n-1 start symbols.
class NGramModel {
 public:
  static absl::StatusOr<NGramModel> Train(
      std::span<const std::vector<std::string>> documents, int order,
      double smoothing_k = 1.0);

  // Tokenizes each document first.
  static absl::StatusOr<NGramModel> TrainOnText(
      std::span<const std::string> documents, int order,
      double smoothing_k = 1.0);

  // P(token | last order-1 entries of context); shorter contexts are padded
  // on the left with start symbols.
  absl::StatusOr<double> Probability(std::span<const std::string> context,
                                     std::string_view token) const;
  absl::StatusOr<double> ConditionalLogProb(
      std::span<const std::string> context, std::string_view token) const;

  // Per-token log P(t_i | t_{i-n+1..i-1}) with start padding.
  absl::StatusOr<std::vector<double>> TokenLogProbs(
      std::span<const std::string> tokens) const;

  // Sum of TokenLogProbs; zero for an empty sequence.
  absl::StatusOr<double> LogProb(std::span<const std::string> tokens) const;

  int order() const { return order_; }
  double smoothing_k() const { return smoothing_k_; }
  int vocabulary_size() const { return static_cast<int>(vocabulary_.size()); }
  const std::set<std::string, std::less<>>& vocabulary() const {
    return vocabulary_;
  }
  bool InVocabulary(std::string_view token) const {
    return vocabulary_.contains(token);
  }

 private:
  NGramModel() = default;

  std::string ContextKey(std::span<const std::string> context) const;

  int order_ = 1;
  double smoothing_k_ = 1.0;
  std::set<std::string, std::less<>> vocabulary_;
  // context key -> token -> count
  std::map<std::string, std::map<std::string, int, std::less<>>> counts_;
  std::map<std::string, int> context_totals_;
};

}  // namespace assesskit::text

#endif  // ASSESSKIT_TEXT_NGRAM_H_
