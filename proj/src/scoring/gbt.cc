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

#include "assesskit/scoring/gbt.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "assesskit/common/random.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/scoring/agreement.h"
#include "assesskit/scoring/band.h"

namespace assesskit::scoring {
namespace {

constexpr double kMinGain = 1e-12;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& rows,
              const std::vector<double>& residuals, const TrainParams& params)
      : rows_(rows), residuals_(residuals), params_(params) {}

  RegressionTree Build(std::vector<int> indices) {
    RegressionTree tree;
    tree.nodes.emplace_back();
    Grow(tree, 0, std::move(indices), 0);
    return tree;
  }

 private:
  void Grow(RegressionTree& tree, int node, std::vector<int> indices,
            int depth) {
    double sum = 0.0;
    for (int i : indices) sum += residuals_[i];
    const double mean = sum / static_cast<double>(indices.size());
    tree.nodes[node].value = mean;
    if (depth >= params_.max_depth) return;
    const Split split = BestSplit(indices, sum);
    if (split.feature < 0) return;

    std::vector<int> left, right;
    for (int i : indices) {
      (rows_[i][split.feature] < split.threshold ? left : right).push_back(i);
    }
    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const int right_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node].feature = split.feature;
    tree.nodes[node].threshold = split.threshold;
    tree.nodes[node].left = left_id;
    tree.nodes[node].right = right_id;
    tree.nodes[node].value = 0.0;
    Grow(tree, left_id, std::move(left), depth + 1);
    Grow(tree, right_id, std::move(right), depth + 1);
  }

  Split BestSplit(const std::vector<int>& indices, double total) const {
    Split best;
    const size_t n = indices.size();
    const size_t min_leaf = static_cast<size_t>(std::max(1, params_.min_leaf_size));
    if (n < 2 * min_leaf) return best;
    const double parent = total * total / static_cast<double>(n);
    const int num_features = static_cast<int>(rows_[indices[0]].size());
    std::vector<int> order(indices);
    for (int f = 0; f < num_features; ++f) {
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return rows_[a][f] < rows_[b][f];
      });
      double left_sum = 0.0;
      for (size_t k = 0; k + 1 < n; ++k) {
        left_sum += residuals_[order[k]];
        const double lo = rows_[order[k]][f];
        const double hi = rows_[order[k + 1]][f];
        const size_t n_left = k + 1;
        const size_t n_right = n - n_left;
        if (lo == hi || n_left < min_leaf || n_right < min_leaf) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / n_left +
                            right_sum * right_sum / n_right - parent;
        if (gain > best.gain + kMinGain) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold > lo)) threshold = hi;
          best = {f, threshold, gain};
        }
      }
    }
    return best;
  }

  const std::vector<std::vector<double>>& rows_;
  const std::vector<double>& residuals_;
  const TrainParams& params_;
};

absl::Status ValidateParams(const TrainParams& params) {
  if (params.num_trees < 0 || params.max_depth < 0 ||
      params.min_leaf_size < 1 || !(params.learning_rate > 0.0) ||
      params.holdout_fraction < 0.0 || params.holdout_fraction >= 1.0 ||
      params.background_size < 1) {
    return absl::InvalidArgumentError("invalid training hyperparameters");
  }
  return absl::OkStatus();
}

}  // namespace

double RegressionTree::Predict(std::span<const double> x) const {
  if (nodes.empty()) return 0.0;
  int node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& n = nodes[node];
    node = x[n.feature] < n.threshold ? n.left : n.right;
  }
  return nodes[node].value;
}

int RegressionTree::Depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<int, int>> stack = {{0, 0}};
  int depth = 0;
  while (!stack.empty()) {
    const auto [node, d] = stack.back();
    stack.pop_back();
    depth = std::max(depth, d);
    if (!nodes[node].is_leaf()) {
      stack.push_back({nodes[node].left, d + 1});
      stack.push_back({nodes[node].right, d + 1});
    }
  }
  return depth;
}

double Ensemble::Predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.Predict(x);
  return base_score + learning_rate * sum;
}

absl::StatusOr<Ensemble> FitEnsemble(
    const std::vector<std::vector<double>>& rows, std::span<const double> labels,
    const TrainParams& params) {
  RETURN_IF_ERROR(ValidateParams(params));
  if (rows.empty() || rows.size() != labels.size()) {
    return absl::InvalidArgumentError("training rows and labels must be "
                                      "non-empty and of equal length");
  }
  const size_t width = rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != width) {
      return absl::InvalidArgumentError("training rows differ in width");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError("training row has a non-finite value");
      }
    }
  }
  Ensemble ensemble;
  ensemble.learning_rate = params.learning_rate;
  ensemble.base_score =
      std::accumulate(labels.begin(), labels.end(), 0.0) / labels.size();
  std::vector<double> prediction(rows.size(), ensemble.base_score);
  std::vector<double> residuals(rows.size());
  std::vector<int> all(rows.size());
  std::iota(all.begin(), all.end(), 0);
  for (int t = 0; t < params.num_trees; ++t) {
    for (size_t i = 0; i < rows.size(); ++i) {
      residuals[i] = labels[i] - prediction[i];
    }
    TreeBuilder builder(rows, residuals, params);
    RegressionTree tree = builder.Build(all);
    // A single-leaf tree means no split improves the fit; later trees would
    // be identical up to shrinking residual means, so stop once it cannot
    // move predictions.
    if (tree.nodes.size() == 1 && std::abs(tree.nodes[0].value) < 1e-15) break;
    for (size_t i = 0; i < rows.size(); ++i) {
      prediction[i] += ensemble.learning_rate * tree.Predict(rows[i]);
    }
    ensemble.trees.push_back(std::move(tree));
  }
  return ensemble;
}

absl::StatusOr<TrainResult> TrainScorer(const TrainingData& data,
                                        const TrainParams& params) {
  RETURN_IF_ERROR(ValidateParams(params));
  if (data.rows.empty() || data.rows.size() != data.labels.size()) {
    return absl::InvalidArgumentError("training dataset is empty");
  }
  for (const auto& row : data.rows) {
    if (row.size() != data.schema.size()) {
      return absl::InvalidArgumentError("row width does not match schema");
    }
  }
  std::vector<size_t> order(data.rows.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(params.seed);
  rng.Shuffle(order);
  size_t n_holdout = static_cast<size_t>(
      std::floor(params.holdout_fraction * static_cast<double>(order.size())));
  if (n_holdout >= order.size()) n_holdout = 0;
  const size_t n_train = order.size() - n_holdout;

  std::vector<std::vector<double>> train_rows;
  std::vector<double> train_labels;
  for (size_t i = 0; i < n_train; ++i) {
    train_rows.push_back(data.rows[order[i]]);
    train_labels.push_back(data.labels[order[i]]);
  }
  auto ensemble = FitEnsemble(train_rows, train_labels, params);
  if (!ensemble.ok()) return ensemble.status();

  TrainResult result;
  result.scorer.ensemble = std::move(*ensemble);
  result.scorer.schema = data.schema;
  for (size_t idx : rng.SampleWithoutReplacement(
           n_train, static_cast<size_t>(params.background_size))) {
    result.scorer.background.push_back(train_rows[idx]);
  }
  result.report.n_train = static_cast<int>(n_train);
  result.report.n_holdout = static_cast<int>(n_holdout);
  result.report.trees_built =
      static_cast<int>(result.scorer.ensemble.trees.size());
  result.report.degenerate =
      std::adjacent_find(train_labels.begin(), train_labels.end(),
                         std::not_equal_to<>()) == train_labels.end();
  if (n_holdout > 0) {
    std::vector<int> predicted_bands, human_bands;
    std::vector<double> predicted, human;
    for (size_t i = n_train; i < order.size(); ++i) {
      const double raw = result.scorer.ensemble.Predict(data.rows[order[i]]);
      predicted.push_back(raw);
      human.push_back(data.labels[order[i]]);
      predicted_bands.push_back(ToBand(raw)->score);
      human_bands.push_back(ToBand(data.labels[order[i]])->score);
    }
    result.report.holdout_qwk =
        QuadraticWeightedKappa(predicted_bands, human_bands);
    result.report.holdout_pearson = PearsonCorrelation(predicted, human);
  }
  return result;
}

absl::StatusOr<std::vector<double>> SchemaValues(
    const TrainedScorer& scorer, const features::FeatureVector& fv) {
  if (fv.size() != scorer.schema.size()) {
    return absl::InvalidArgumentError(
        StrCat("feature vector has ", fv.size(), " features, scorer expects ",
               scorer.schema.size()));
  }
  std::vector<double> values(fv.size());
  for (size_t i = 0; i < fv.size(); ++i) {
    if (fv[i].name != scorer.schema[i].name) {
      return absl::InvalidArgumentError(
          StrCat("feature #", i, " is '", fv[i].name, "', scorer expects '",
                 scorer.schema[i].name, "'"));
    }
    values[i] = fv[i].value;
  }
  return values;
}

absl::StatusOr<double> Predict(const TrainedScorer& scorer,
                               const features::FeatureVector& fv) {
  auto values = SchemaValues(scorer, fv);
  if (!values.ok()) return values.status();
  return scorer.ensemble.Predict(*values);
}

}  // namespace assesskit::scoring
