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

#ifndef ASSESSKIT_SCORING_SHAP_H_
#define ASSESSKIT_SCORING_SHAP_H_

#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/features/feature_vector.h"
#include "assesskit/scoring/gbt.h"

namespace assesskit::scoring {

struct ScoreExplanation {
  double base_value = 0.0;
  double prediction = 0.0;
  // Schema order.
  std::vector<std::pair<std::string, double>> contributions;
  // Indexed by Subconstruct.
  std::array<double, 4> subconstruct_totals{};
};

// Interventional Shapley values of one tree for input x against a single
// reference point z. Features are players; a coalition S evaluates the tree
// at the hybrid point taking x on S and z elsewhere. Adds into `phi`.
// Cost is linear in the number of leaves reachable by x or z.
void TreeShapAgainst(const RegressionTree& tree, std::span<const double> x,
                     std::span<const double> z, double scale,
                     std::span<double> phi);

// Mean over the background of per-reference Shapley values of the ensemble.
// Satisfies base + sum(phi) == ensemble(x) where base is the mean ensemble
// output over the background.
absl::StatusOr<std::vector<double>> InterventionalShap(
    const Ensemble& ensemble, std::span<const double> x,
    const std::vector<std::vector<double>>& background);

absl::StatusOr<ScoreExplanation> Explain(const TrainedScorer& scorer,
                                         const features::FeatureVector& fv);

// Sums contributions per sub-construct. Fails if a contribution's feature is
// missing from `grouping`.
absl::StatusOr<std::array<double, 4>> AggregateSubconstructs(
    const ScoreExplanation& explanation,
    const std::map<std::string, features::Subconstruct>& grouping);

}  // namespace assesskit::scoring

#endif  // ASSESSKIT_SCORING_SHAP_H_
