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

#ifndef ASSESSKIT_FAIRNESS_DIF_H_
#define ASSESSKIT_FAIRNESS_DIF_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace assesskit::fairness {

struct ItemResponse {
  std::string taker_id;
  bool focal = false;
  bool correct = false;
  double total_score = 0.0;  // ability proxy used for stratification
};

// One stratum's 2x2 table. Reference: a correct, b incorrect; focal:
// c correct, d incorrect.
struct StratumTable {
  double a = 0, b = 0, c = 0, d = 0;
  double n() const { return a + b + c + d; }
};

enum class DifStatus { kOk, kInsufficientData, kNonConverged };
std::string_view DifStatusName(DifStatus status);

enum class DifClass { kA, kB, kC };
std::string_view DifClassName(DifClass c);

struct DifThresholds {
  double alpha = 0.05;
  double b_delta = 1.0;  // |delta| below this (or non-significant) is A
  double c_delta = 1.5;  // |delta| above this and significant is C
};

struct MantelHaenszelResult {
  DifStatus status = DifStatus::kInsufficientData;
  std::string detail;
  double chi_square = 0.0;
  double p_value = 1.0;
  double common_odds_ratio = 1.0;
  double delta = 0.0;  // -2.35 ln(odds ratio)
  DifClass classification = DifClass::kA;
  int strata_used = 0;
};

// Mantel-Haenszel statistics over given tables. Tables with a zero row or
// column margin are dropped; fewer than two remaining gives
// kInsufficientData.
MantelHaenszelResult MantelHaenszel(const std::vector<StratumTable>& tables,
                                    const DifThresholds& thresholds = {});

// Deciles of total score (ties kept together), each merged into the next
// higher one until it holds both groups; a deficient top stratum merges
// downward.
std::vector<StratumTable> StratifyByTotalScore(
    const std::vector<ItemResponse>& responses);

MantelHaenszelResult DifMantelHaenszel(const std::vector<ItemResponse>& responses,
                                       const DifThresholds& thresholds = {});

DifClass ClassifyDelta(double delta, double p_value,
                       const DifThresholds& thresholds);

struct LogisticFit {
  bool converged = false;
  int iterations = 0;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  double log_likelihood = 0.0;
};

struct LogisticOptions {
  int max_iterations = 50;
  double tolerance = 1e-10;
  // Coefficients beyond this magnitude signal separation.
  double divergence_bound = 1e3;
};

// Maximum-likelihood logistic regression by Newton-Raphson. Rows of `x`
// include any intercept column.
LogisticFit FitLogistic(const std::vector<std::vector<double>>& x,
                        const std::vector<double>& y,
                        const LogisticOptions& options = {});

struct LogisticDifResult {
  DifStatus status = DifStatus::kInsufficientData;
  std::string detail;
  // Model with ability and group: group coefficient and its standard error.
  double group_coefficient = 0.0;
  double group_standard_error = 0.0;
  double lr_uniform_chi_square = 0.0;
  double lr_uniform_p = 1.0;
  double lr_nonuniform_chi_square = 0.0;
  double lr_nonuniform_p = 1.0;
};

// Nested fits: ability; + group; + group x ability. Likelihood-ratio tests
// (1 df each) for the two increments.
LogisticDifResult DifLogistic(const std::vector<ItemResponse>& responses,
                              const LogisticOptions& options = {});

struct DifResult {
  std::string item_id;
  MantelHaenszelResult mh;
  LogisticDifResult logistic;
};

double ChiSquareSurvival(double statistic, double df);

}  // namespace assesskit::fairness

#endif  // ASSESSKIT_FAIRNESS_DIF_H_
