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

#include "assesskit/text/ngram.h"

#include <cmath>

#include "absl/status/status.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::text {

absl::StatusOr<NGramModel> NGramModel::Train(
    std::span<const std::vector<std::string>> documents, int order,
    double smoothing_k) {
  if (order < 1) return absl::InvalidArgumentError("n-gram order must be >= 1");
  if (!(smoothing_k > 0.0)) {
    return absl::InvalidArgumentError("smoothing constant must be positive");
  }
  NGramModel model;
  model.order_ = order;
  model.smoothing_k_ = smoothing_k;
  for (const auto& doc : documents) {
    std::vector<std::string> padded(order - 1, std::string(kSentenceStart));
    padded.insert(padded.end(), doc.begin(), doc.end());
    for (size_t i = order - 1; i < padded.size(); ++i) {
      const std::span<const std::string> ctx(padded.data() + i - (order - 1),
                                             order - 1);
      const std::string key = model.ContextKey(ctx);
      ++model.counts_[key][padded[i]];
      ++model.context_totals_[key];
      model.vocabulary_.insert(padded[i]);
    }
  }
  return model;
}

absl::StatusOr<NGramModel> NGramModel::TrainOnText(
    std::span<const std::string> documents, int order, double smoothing_k) {
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(documents.size());
  for (const auto& doc : documents) tokenized.push_back(TokenizeWords(doc));
  return Train(tokenized, order, smoothing_k);
}

std::string NGramModel::ContextKey(std::span<const std::string> context) const {
  std::string key;
  for (size_t i = 0; i < context.size(); ++i) {
    if (i > 0) key.push_back('\x1f');
    key += context[i];
  }
  return key;
}

absl::StatusOr<double> NGramModel::Probability(
    std::span<const std::string> context, std::string_view token) const {
  if (vocabulary_.empty()) {
    return absl::FailedPreconditionError(
        "n-gram model has an empty vocabulary");
  }
  const size_t need = static_cast<size_t>(order_ - 1);
  std::vector<std::string> ctx;
  ctx.reserve(need);
  if (context.size() < need) {
    ctx.assign(need - context.size(), std::string(kSentenceStart));
    ctx.insert(ctx.end(), context.begin(), context.end());
  } else {
    ctx.assign(context.end() - need, context.end());
  }
  const std::string key = ContextKey(ctx);
  double count = 0.0;
  double total = 0.0;
  if (const auto it = counts_.find(key); it != counts_.end()) {
    total = context_totals_.at(key);
    if (const auto jt = it->second.find(token); jt != it->second.end()) {
      count = jt->second;
    }
  }
  const double v = static_cast<double>(vocabulary_.size());
  return (count + smoothing_k_) / (total + smoothing_k_ * (v + 1.0));
}

absl::StatusOr<double> NGramModel::ConditionalLogProb(
    std::span<const std::string> context, std::string_view token) const {
  const auto p = Probability(context, token);
  if (!p.ok()) return p.status();
  return std::log(*p);
}

absl::StatusOr<std::vector<double>> NGramModel::TokenLogProbs(
    std::span<const std::string> tokens) const {
  if (vocabulary_.empty()) {
    return absl::FailedPreconditionError(
        "n-gram model has an empty vocabulary");
  }
  std::vector<double> out;
  out.reserve(tokens.size());
  const size_t need = static_cast<size_t>(order_ - 1);
  for (size_t i = 0; i < tokens.size(); ++i) {
    const size_t begin = i >= need ? i - need : 0;
    const auto lp = ConditionalLogProb(tokens.subspan(begin, i - begin),
                                       tokens[i]);
    if (!lp.ok()) return lp.status();
    out.push_back(*lp);
  }
  return out;
}

absl::StatusOr<double> NGramModel::LogProb(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) return 0.0;
  const auto per_token = TokenLogProbs(tokens);
  if (!per_token.ok()) return per_token.status();
  double sum = 0.0;
  for (double lp : *per_token) sum += lp;
  return sum;
}

}  // namespace assesskit::text
