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

#ifndef ASSESSKIT_SCORING_BAND_H_
#define ASSESSKIT_SCORING_BAND_H_

#include <string_view>

#include "absl/status/statusor.h"

namespace assesskit::scoring {

struct Band {
  int score = 1;             // 1..6
  std::string_view cefr;     // "A1".."C2"
};

// Clamps to [1, 6] and rounds to the nearest integer, ties upwards.
absl::StatusOr<Band> ToBand(double raw);

}  // namespace assesskit::scoring

#endif  // ASSESSKIT_SCORING_BAND_H_
