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

#include "assesskit/scoring/band.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "assesskit/features/cefr.h"

namespace assesskit::scoring {

absl::StatusOr<Band> ToBand(double raw) {
  if (!std::isfinite(raw)) {
    return absl::InvalidArgumentError("raw score is not finite");
  }
  const double clamped = std::clamp(raw, 1.0, 6.0);
  const int score = std::clamp(static_cast<int>(std::floor(clamped + 0.5)), 1, 6);
  return Band{score, features::kCefrLabels[score - 1]};
}

}  // namespace assesskit::scoring
