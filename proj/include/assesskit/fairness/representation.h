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

#ifndef ASSESSKIT_FAIRNESS_REPRESENTATION_H_
#define ASSESSKIT_FAIRNESS_REPRESENTATION_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/common/demographics.h"

namespace assesskit::fairness {

// (gender, l1)
using Cell = std::pair<std::string, std::string>;

struct CellStat {
  Cell cell;
  int count = 0;
  double proportion = 0.0;
  double target = 0.0;
  double deviation = 0.0;  // |proportion - target|
};

struct RepresentationReport {
  int total = 0;
  double tolerance = 0.0;
  // Targeted cells first in target order, then untargeted cells seen in the
  // data (target 0), each group sorted by (gender, l1).
  std::vector<CellStat> cells;
  std::vector<Cell> failing_cells;
  bool pass = false;
};

// Allowed |proportion - target| per cell unless configured otherwise.
inline constexpr double kDefaultRepresentationTolerance = 0.05;

struct DemographicEntry {
  std::string record_id;
  DemographicRecord demographics;
};

// Equal weight on every gender x L1 cell, excluding the catch-all "other".
std::map<Cell, double> UniformTargets(const DemographicVocabulary& vocabulary);

// Targets must sum to 1 (within 1e-9). A record whose gender or L1 is
// outside the vocabulary fails the report with an error naming it.
absl::StatusOr<RepresentationReport> BuildRepresentationReport(
    const std::vector<DemographicEntry>& records,
    const std::map<Cell, double>& targets, double tolerance,
    const DemographicVocabulary& vocabulary);

}  // namespace assesskit::fairness

#endif  // ASSESSKIT_FAIRNESS_REPRESENTATION_H_
