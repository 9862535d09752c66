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

#ifndef ASSESSKIT_SCORING_MODEL_IO_H_
#define ASSESSKIT_SCORING_MODEL_IO_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "assesskit/scoring/gbt.h"

namespace assesskit::scoring {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON document. Doubles are written in shortest round-trip form,
// so Parse(Serialize(m)) == m bit for bit.
std::string SerializeScorer(const TrainedScorer& scorer);
absl::StatusOr<TrainedScorer> ParseScorer(std::string_view json_text);

absl::Status SaveScorer(const TrainedScorer& scorer, const std::string& path);
absl::StatusOr<TrainedScorer> LoadScorer(const std::string& path);

}  // namespace assesskit::scoring

#endif  // ASSESSKIT_SCORING_MODEL_IO_H_
