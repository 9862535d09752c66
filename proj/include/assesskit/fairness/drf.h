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

#ifndef ASSESSKIT_FAIRNESS_DRF_H_
#define ASSESSKIT_FAIRNESS_DRF_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace assesskit::fairness {

struct DrfRecord {
  std::string record_id;
  double machine = 0.0;    // machine score or one feature value
  double consensus = 0.0;  // human consensus score
  std::string group;
};

struct DrfOptions {
  // Defaults to the most frequent group (ties broken by name).
  std::optional<std::string> reference_group;
  double coefficient_threshold = 0.1;
  double alpha = 0.05;
};

struct GroupCoefficient {
  std::string group;
  double coefficient = 0.0;
  double standard_error = 0.0;
  double p_value = 1.0;
  bool flagged = false;
};

enum class DrfStatus { kOk, kInsufficientGroups, kCollinear };
std::string_view DrfStatusName(DrfStatus status);

struct DrfResult {
  std::string scope;  // "score" or "feature:<name>"
  DrfStatus status = DrfStatus::kInsufficientGroups;
  std::string reference_group;
  double intercept = 0.0;
  double consensus_slope = 0.0;
  std::vector<GroupCoefficient> groups;  // non-reference groups by name
  std::vector<std::string> flagged_groups;
  int n = 0;
};

// Least squares of machine ~ 1 + consensus + group contrasts against the
// reference group. Student-t p-values with n - p degrees of freedom.
absl::StatusOr<DrfResult> DrfAnalysis(std::string_view scope,
                                      const std::vector<DrfRecord>& records,
                                      const DrfOptions& options = {});

}  // namespace assesskit::fairness

#endif  // ASSESSKIT_FAIRNESS_DRF_H_
