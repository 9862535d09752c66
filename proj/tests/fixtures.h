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

#ifndef ASSESSKIT_TESTS_FIXTURES_H_
#define ASSESSKIT_TESTS_FIXTURES_H_

#include <vector>

#include <algorithm>
#include <cmath>
#include <string>

#include "assesskit/common/random.h"
#include "assesskit/fairness/dif.h"
#include "assesskit/fairness/drf.h"
#include "assesskit/scoring/gbt.h"

namespace assesskit::fixtures {

// Random tree over `num_features` features with thresholds drawn from a
// small grid so that inputs often hit both sides and repeat features.
inline void GrowRandom(Rng& rng, scoring::RegressionTree& tree, int node,
                       int depth, int max_depth, int num_features) {
  if (depth == max_depth || (depth > 0 && rng.Bernoulli(0.2))) {
    tree.nodes[node].value = rng.Uniform(-2.0, 2.0);
    return;
  }
  tree.nodes[node].feature = static_cast<int>(rng.UniformInt(num_features));
  tree.nodes[node].threshold = static_cast<double>(rng.UniformInt(5)) / 4.0;
  const int left = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  const int right = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  tree.nodes[node].left = left;
  tree.nodes[node].right = right;
  GrowRandom(rng, tree, left, depth + 1, max_depth, num_features);
  GrowRandom(rng, tree, right, depth + 1, max_depth, num_features);
}

inline scoring::Ensemble RandomEnsemble(Rng& rng, int num_features,
                                        int num_trees, int max_depth) {
  scoring::Ensemble ensemble;
  ensemble.base_score = rng.Uniform(1.0, 6.0);
  ensemble.learning_rate = rng.Uniform(0.05, 1.0);
  for (int t = 0; t < num_trees; ++t) {
    scoring::RegressionTree tree;
    tree.nodes.emplace_back();
    GrowRandom(rng, tree, 0, 0, max_depth, num_features);
    ensemble.trees.push_back(std::move(tree));
  }
  return ensemble;
}

// Point on the threshold grid, so ties with thresholds occur.
inline std::vector<double> RandomPoint(Rng& rng, int num_features) {
  std::vector<double> x(num_features);
  for (double& v : x) v = static_cast<double>(rng.UniformInt(9)) / 8.0;
  return x;
}

// Studied item answered by n takers, half focal. Ability is standard normal;
// the total score is the number correct on `anchor_items` Rasch items of
// spread-out difficulty. The focal group's probability on the studied item
// is lowered by `focal_penalty` at every ability level.
inline std::vector<fairness::ItemResponse> SimulateDifItem(Rng& rng, int n,
                                                           double focal_penalty,
                                                           int anchor_items = 30) {
  std::vector<fairness::ItemResponse> out;
  for (int i = 0; i < n; ++i) {
    fairness::ItemResponse r;
    r.taker_id = "t" + std::to_string(i);
    r.focal = i % 2 == 1;
    const double theta = rng.Normal();
    int total = 0;
    for (int k = 0; k < anchor_items; ++k) {
      const double b = -2.0 + 4.0 * k / (anchor_items - 1);
      total += rng.Bernoulli(1.0 / (1.0 + std::exp(-(theta - b))));
    }
    r.total_score = total;
    double p = 1.0 / (1.0 + std::exp(-theta));
    if (r.focal) p = std::max(0.0, p - focal_penalty);
    r.correct = rng.Bernoulli(p);
    out.push_back(std::move(r));
  }
  return out;
}

// Machine score = consensus + N(0, 0.3) plus `offset` for one L1 group.
inline std::vector<fairness::DrfRecord> SimulateDrf(Rng& rng, int n,
                                                    const std::string& offset_group,
                                                    double offset) {
  static const char* kGroups[] = {"Arabic", "Bengali", "English", "Spanish"};
  std::vector<fairness::DrfRecord> out;
  for (int i = 0; i < n; ++i) {
    fairness::DrfRecord r;
    r.record_id = "r" + std::to_string(i);
    r.group = kGroups[i % 4];
    r.consensus = 1.0 + static_cast<double>(rng.UniformInt(11)) / 2.0;
    r.machine = r.consensus + rng.Normal(0.0, 0.3) + (r.group == offset_group ? offset : 0.0);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace assesskit::fixtures

#endif  // ASSESSKIT_TESTS_FIXTURES_H_
