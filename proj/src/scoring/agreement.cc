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

#include "assesskit/scoring/agreement.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace assesskit::scoring {
namespace {

bool HasVariance(std::span<const int> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) !=
         v.end();
}

}  // namespace

std::optional<double> QuadraticWeightedKappa(std::span<const int> a,
                                             std::span<const int> b,
                                             int min_score, int max_score) {
  if (a.empty() || a.size() != b.size() || max_score <= min_score) {
    return std::nullopt;
  }
  if (!HasVariance(a) || !HasVariance(b)) return std::nullopt;
  const int k = max_score - min_score + 1;
  std::vector<double> observed(k * k, 0.0);
  std::vector<double> row(k, 0.0), col(k, 0.0);
  for (size_t n = 0; n < a.size(); ++n) {
    const int i = std::clamp(a[n], min_score, max_score) - min_score;
    const int j = std::clamp(b[n], min_score, max_score) - min_score;
    observed[i * k + j] += 1.0;
    row[i] += 1.0;
    col[j] += 1.0;
  }
  const double total = static_cast<double>(a.size());
  double numerator = 0.0, denominator = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double w = static_cast<double>((i - j) * (i - j)) /
                       static_cast<double>((k - 1) * (k - 1));
      numerator += w * observed[i * k + j];
      denominator += w * row[i] * col[j] / total;
    }
  }
  if (denominator == 0.0) return std::nullopt;
  return 1.0 - numerator / denominator;
}

std::optional<double> PearsonCorrelation(std::span<const double> a,
                                         std::span<const double> b) {
  if (a.size() < 2 || a.size() != b.size()) return std::nullopt;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

AgreementReport PairedAgreement(std::span<const int> a, std::span<const int> b) {
  AgreementReport report;
  const size_t n = std::min(a.size(), b.size());
  report.n_pairs = static_cast<int>(n);
  if (n == 0) return report;
  int exact = 0, adjacent = 0;
  for (size_t i = 0; i < n; ++i) {
    const int diff = std::abs(a[i] - b[i]);
    exact += diff == 0;
    adjacent += diff <= 1;
  }
  report.exact_agreement = static_cast<double>(exact) / n;
  report.adjacent_agreement = static_cast<double>(adjacent) / n;
  report.quadratic_weighted_kappa =
      QuadraticWeightedKappa(a.first(n), b.first(n));
  report.qwk_status = report.quadratic_weighted_kappa.has_value()
                          ? KappaStatus::kDefined
                          : KappaStatus::kUndefined;
  const std::vector<double> da(a.begin(), a.begin() + n);
  const std::vector<double> db(b.begin(), b.begin() + n);
  report.pearson_r = PearsonCorrelation(da, db);
  return report;
}

AgreementReport RaterAgreement(
    const std::map<std::string, std::vector<RaterScore>>& by_response) {
  std::vector<int> a, b;
  for (const auto& [response_id, scores] : by_response) {
    if (scores.size() < 2) continue;
    std::vector<RaterScore> sorted = scores;
    std::sort(sorted.begin(), sorted.end(),
              [](const RaterScore& x, const RaterScore& y) {
                return x.rater_id < y.rater_id;
              });
    for (size_t i = 0; i < sorted.size(); ++i) {
      for (size_t j = i + 1; j < sorted.size(); ++j) {
        a.push_back(sorted[i].score);
        b.push_back(sorted[j].score);
      }
    }
  }
  return PairedAgreement(a, b);
}

}  // namespace assesskit::scoring
