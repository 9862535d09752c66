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

#ifndef ASSESSKIT_FAIRNESS_ROUTE_H_
#define ASSESSKIT_FAIRNESS_ROUTE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/fairness/dif.h"
#include "assesskit/fairness/drf.h"
#include "assesskit/review/queue.h"
#include "json.hpp"

namespace assesskit::fairness {

nlohmann::json ToJson(const MantelHaenszelResult& mh);
nlohmann::json ToJson(const LogisticDifResult& lr);
nlohmann::json ToJson(const DifResult& result);
nlohmann::json ToJson(const DrfResult& result);

// Every class-C DIF item and every flagged DRF group becomes a pending FAB
// entry carrying its statistics. Returns the created entries in order: DIF
// results first, then DRF groups.
absl::StatusOr<std::vector<review::ReviewEntry>> RouteFlags(
    const std::vector<DifResult>& dif, const std::vector<DrfResult>& drf,
    review::ReviewQueue& queue, const std::function<std::string()>& next_id,
    int64_t now_ms);

}  // namespace assesskit::fairness

#endif  // ASSESSKIT_FAIRNESS_ROUTE_H_
