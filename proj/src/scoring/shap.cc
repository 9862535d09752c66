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

#include "assesskit/scoring/shap.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"

namespace assesskit::scoring {
namespace {

// Path state while walking the hybrid tree. Each feature on the path is
// either pinned to x (in_x), pinned to z (in_z) or undecided.
enum class Side : unsigned char { kFree, kX, kZ };

class HybridWalker {
 public:
  HybridWalker(const RegressionTree& tree, std::span<const double> x,
               std::span<const double> z, double scale, std::span<double> phi)
      : tree_(tree), x_(x), z_(z), scale_(scale), phi_(phi),
        side_(x.size(), Side::kFree) {
    // weights_[s][p] = s! (p - s - 1)! / p!
    const size_t m = x.size() + 1;
    weights_.assign(m, std::vector<double>(m, 0.0));
    for (size_t p = 1; p < m; ++p) {
      for (size_t s = 0; s < p; ++s) weights_[s][p] = Weight(s, p);
    }
  }

  void Run() { Walk(0, 0, 0); }

 private:
  static double Weight(size_t s, size_t p) {
    // s! (p-s-1)! / p! = 1 / (p * C(p-1, s))
    double binom = 1.0;
    for (size_t i = 1; i <= s; ++i) {
      binom = binom * static_cast<double>(p - 1 - s + i) / static_cast<double>(i);
    }
    return 1.0 / (static_cast<double>(p) * binom);
  }

  void Walk(int node_id, size_t n_x, size_t n_z) {
    const TreeNode& node = tree_.nodes[node_id];
    if (node.is_leaf()) {
      if (n_x + n_z == 0) return;
      const double v = scale_ * node.value;
      const size_t p = n_x + n_z;
      const double gain = n_x > 0 ? weights_[n_x - 1][p] * v : 0.0;
      const double loss = n_z > 0 ? weights_[n_x][p] * v : 0.0;
      for (int f : path_) {
        if (side_[f] == Side::kX) phi_[f] += gain;
        else phi_[f] -= loss;
      }
      return;
    }
    const int f = node.feature;
    const int x_child = x_[f] < node.threshold ? node.left : node.right;
    const int z_child = z_[f] < node.threshold ? node.left : node.right;
    switch (side_[f]) {
      case Side::kX:
        Walk(x_child, n_x, n_z);
        return;
      case Side::kZ:
        Walk(z_child, n_x, n_z);
        return;
      case Side::kFree:
        break;
    }
    if (x_child == z_child) {
      Walk(x_child, n_x, n_z);
      return;
    }
    path_.push_back(f);
    side_[f] = Side::kX;
    Walk(x_child, n_x + 1, n_z);
    side_[f] = Side::kZ;
    Walk(z_child, n_x, n_z + 1);
    side_[f] = Side::kFree;
    path_.pop_back();
  }

  const RegressionTree& tree_;
  std::span<const double> x_;
  std::span<const double> z_;
  double scale_;
  std::span<double> phi_;
  std::vector<Side> side_;
  std::vector<int> path_;
  std::vector<std::vector<double>> weights_;
};

}  // namespace

void TreeShapAgainst(const RegressionTree& tree, std::span<const double> x,
                     std::span<const double> z, double scale,
                     std::span<double> phi) {
  if (tree.nodes.empty()) return;
  HybridWalker(tree, x, z, scale, phi).Run();
}

absl::StatusOr<std::vector<double>> InterventionalShap(
    const Ensemble& ensemble, std::span<const double> x,
    const std::vector<std::vector<double>>& background) {
  if (background.empty()) {
    return absl::FailedPreconditionError("explanation background is empty");
  }
  for (const auto& z : background) {
    if (z.size() != x.size()) {
      return absl::InvalidArgumentError("background row width differs from input");
    }
  }
  for (const auto& tree : ensemble.trees) {
    for (const auto& node : tree.nodes) {
      if (!node.is_leaf() && node.feature >= static_cast<int>(x.size())) {
        return absl::InvalidArgumentError("tree references a feature outside the input");
      }
    }
  }
  std::vector<double> phi(x.size(), 0.0);
  for (const auto& z : background) {
    for (const auto& tree : ensemble.trees) {
      TreeShapAgainst(tree, x, z, ensemble.learning_rate, phi);
    }
  }
  const double n = static_cast<double>(background.size());
  for (double& v : phi) v /= n;
  return phi;
}

absl::StatusOr<ScoreExplanation> Explain(const TrainedScorer& scorer,
                                         const features::FeatureVector& fv) {
  ASSIGN_OR_RETURN(std::vector<double> x, SchemaValues(scorer, fv));
  ASSIGN_OR_RETURN(std::vector<double> phi,
                   InterventionalShap(scorer.ensemble, x, scorer.background));
  ScoreExplanation out;
  for (const auto& z : scorer.background) out.base_value += scorer.ensemble.Predict(z);
  out.base_value /= static_cast<double>(scorer.background.size());
  out.prediction = scorer.ensemble.Predict(x);
  std::map<std::string, features::Subconstruct> grouping;
  for (size_t i = 0; i < phi.size(); ++i) {
    out.contributions.emplace_back(scorer.schema[i].name, phi[i]);
    grouping[scorer.schema[i].name] = scorer.schema[i].group;
  }
  ASSIGN_OR_RETURN(out.subconstruct_totals, AggregateSubconstructs(out, grouping));
  return out;
}

absl::StatusOr<std::array<double, 4>> AggregateSubconstructs(
    const ScoreExplanation& explanation,
    const std::map<std::string, features::Subconstruct>& grouping) {
  std::array<double, 4> totals{};
  for (const auto& [name, value] : explanation.contributions) {
    auto it = grouping.find(name);
    if (it == grouping.end()) {
      return absl::InvalidArgumentError(
          StrCat("feature '", name, "' has no sub-construct"));
    }
    totals[static_cast<size_t>(it->second)] += value;
  }
  return totals;
}

}  // namespace assesskit::scoring
