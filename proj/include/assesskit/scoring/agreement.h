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

#ifndef ASSESSKIT_SCORING_AGREEMENT_H_
#define ASSESSKIT_SCORING_AGREEMENT_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace assesskit::scoring {

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 6;

enum class KappaStatus { kDefined, kUndefined };

struct AgreementReport {
  double exact_agreement = 0.0;
  double adjacent_agreement = 0.0;
  KappaStatus qwk_status = KappaStatus::kUndefined;
  // Present only when qwk_status is kDefined.
  std::optional<double> quadratic_weighted_kappa;
  std::optional<double> pearson_r;
  int n_pairs = 0;
};

// Quadratic weighted kappa over the (max-min+1)^2 contingency table:
//   kappa = 1 - sum_ij w_ij O_ij / sum_ij w_ij E_ij,
//   w_ij = (i-j)^2 / (K-1)^2,  E = outer(row marginals, column marginals) / N.
// nullopt when either side has zero variance or the inputs are empty.
std::optional<double> QuadraticWeightedKappa(std::span<const int> a,
                                             std::span<const int> b,
                                             int min_score = kMinScore,
                                             int max_score = kMaxScore);

std::optional<double> PearsonCorrelation(std::span<const double> a,
                                         std::span<const double> b);

// Agreement between paired integer scores.
AgreementReport PairedAgreement(std::span<const int> a, std::span<const int> b);

struct RaterScore {
  std::string rater_id;
  int score = 0;
};

// Every unordered pair of raters on each response contributes one (a, b)
// pair, with a the lexicographically smaller rater id. Responses with fewer
// than two raters are skipped.
AgreementReport RaterAgreement(
    const std::map<std::string, std::vector<RaterScore>>& by_response);

}  // namespace assesskit::scoring

#endif  // ASSESSKIT_SCORING_AGREEMENT_H_
