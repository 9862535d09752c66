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

#include "assesskit/fairness/representation.h"

#include <cmath>

#include "absl/status/status.h"
#include "assesskit/common/strings.h"

namespace assesskit::fairness {

std::map<Cell, double> UniformTargets(const DemographicVocabulary& vocabulary) {
  std::vector<Cell> cells;
  for (const auto& g : vocabulary.genders) {
    for (const auto& l : vocabulary.l1s) {
      if (l != "other") cells.emplace_back(g, l);
    }
  }
  std::map<Cell, double> targets;
  for (const auto& c : cells) targets[c] = 1.0 / static_cast<double>(cells.size());
  return targets;
}

absl::StatusOr<RepresentationReport> BuildRepresentationReport(
    const std::vector<DemographicEntry>& records,
    const std::map<Cell, double>& targets, double tolerance,
    const DemographicVocabulary& vocabulary) {
  double target_sum = 0.0;
  for (const auto& [cell, t] : targets) {
    if (t < 0.0) {
      return absl::InvalidArgumentError(
          StrCat("negative target for ", cell.first, "/", cell.second));
    }
    target_sum += t;
  }
  if (std::abs(target_sum - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        StrCat("targets sum to ", target_sum, ", expected 1"));
  }
  std::map<Cell, int> counts;
  for (const auto& r : records) {
    if (auto status = vocabulary.Validate(r.demographics); !status.ok()) {
      return absl::InvalidArgumentError(
          StrCat("record '", r.record_id, "': ", status.message()));
    }
    ++counts[{r.demographics.gender, r.demographics.l1}];
  }
  RepresentationReport report;
  report.total = static_cast<int>(records.size());
  report.tolerance = tolerance;
  auto add = [&](const Cell& cell, double target) {
    CellStat stat;
    stat.cell = cell;
    auto it = counts.find(cell);
    stat.count = it == counts.end() ? 0 : it->second;
    stat.proportion = report.total == 0
                          ? 0.0
                          : static_cast<double>(stat.count) / report.total;
    stat.target = target;
    stat.deviation = std::abs(stat.proportion - target);
    if (stat.deviation > tolerance) report.failing_cells.push_back(cell);
    report.cells.push_back(std::move(stat));
  };
  for (const auto& [cell, t] : targets) add(cell, t);
  for (const auto& [cell, n] : counts) {
    if (!targets.contains(cell)) add(cell, 0.0);
  }
  report.pass = report.failing_cells.empty();
  return report;
}

}  // namespace assesskit::fairness
