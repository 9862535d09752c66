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

#ifndef ASSESSKIT_SCORING_GBT_H_
#define ASSESSKIT_SCORING_GBT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/features/feature_vector.h"

namespace assesskit::scoring {

// Node of a binary regression tree stored in a flat array. A node with
// feature < 0 is a leaf. Internal nodes route x[feature] < threshold to
// `left` and everything else to `right`.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double Predict(std::span<const double> x) const;
  int Depth() const;
  bool operator==(const RegressionTree&) const = default;
};

// prediction(x) = base_score + learning_rate * sum_t tree_t(x)
struct Ensemble {
  double base_score = 0.0;
  double learning_rate = 1.0;
  std::vector<RegressionTree> trees;

  double Predict(std::span<const double> x) const;
  bool operator==(const Ensemble&) const = default;
};

struct SchemaEntry {
  std::string name;
  features::Subconstruct group = features::Subconstruct::kContent;
  bool operator==(const SchemaEntry&) const = default;
};

struct TrainedScorer {
  Ensemble ensemble;
  std::vector<SchemaEntry> schema;
  // Reference rows for interventional explanations.
  std::vector<std::vector<double>> background;

  bool operator==(const TrainedScorer&) const = default;
};

struct TrainParams {
  int num_trees = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  int min_leaf_size = 5;
  uint64_t seed = 42;
  double holdout_fraction = 0.2;
  int background_size = 64;
};

struct TrainReport {
  int n_train = 0;
  int n_holdout = 0;
  std::optional<double> holdout_qwk;
  std::optional<double> holdout_pearson;
  // All training labels equal: the model is the constant base score.
  bool degenerate = false;
  int trees_built = 0;
};

struct TrainingData {
  std::vector<SchemaEntry> schema;
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
};

struct TrainResult {
  TrainedScorer scorer;
  TrainReport report;
};

// Squared-error gradient boosting with exact greedy splits. Rows are
// shuffled with `seed`; the last holdout_fraction of them are held out for
// the system-human agreement report.
absl::StatusOr<TrainResult> TrainScorer(const TrainingData& data,
                                        const TrainParams& params);

// Fits `num_trees` trees on all rows (no holdout, no background).
absl::StatusOr<Ensemble> FitEnsemble(
    const std::vector<std::vector<double>>& rows, std::span<const double> labels,
    const TrainParams& params);

// Checks names and order against the scorer schema.
absl::StatusOr<double> Predict(const TrainedScorer& scorer,
                               const features::FeatureVector& fv);
absl::StatusOr<std::vector<double>> SchemaValues(
    const TrainedScorer& scorer, const features::FeatureVector& fv);

}  // namespace assesskit::scoring

#endif  // ASSESSKIT_SCORING_GBT_H_
