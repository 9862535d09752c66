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

#ifndef ASSESSKIT_SCORING_RATINGS_H_
#define ASSESSKIT_SCORING_RATINGS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/common/demographics.h"
#include "assesskit/features/extractors.h"
#include "assesskit/features/feature_vector.h"
#include "assesskit/scoring/agreement.h"

namespace assesskit::scoring {

struct RatingRecord {
  std::string response_id;
  std::string rater_id;
  int score = 0;  // 1..6

  bool operator==(const RatingRecord&) const = default;
};

// JSON-lines {"response_id","rater_id","score"}. Blank lines are skipped.
// Any malformed or out-of-range record fails the whole file with an error
// naming its line number.
absl::StatusOr<std::vector<RatingRecord>> ParseRatings(std::string_view jsonl);
absl::StatusOr<std::vector<RatingRecord>> LoadRatings(const std::string& path);

std::map<std::string, std::vector<RaterScore>> GroupByResponse(
    const std::vector<RatingRecord>& ratings);

struct RejectedResponse {
  std::string response_id;
  std::string reason;
};

struct ConsensusResult {
  std::map<std::string, double> consensus;  // response_id -> mean score
  std::vector<RejectedResponse> rejected;
};

// Mean of rater scores per response; responses with fewer than min_raters
// ratings are rejected.
ConsensusResult Consensus(const std::vector<RatingRecord>& ratings,
                          int min_raters);

// JSON-lines responses: {"response_id","prompt_id","text","prep_seconds",
// "write_seconds","demographics":{"gender","l1"}}. Timing and demographics
// are optional.
absl::StatusOr<std::vector<features::WritingResponse>> ParseResponses(
    std::string_view jsonl);
absl::StatusOr<std::vector<features::WritingResponse>> LoadResponses(
    const std::string& path);

struct LabeledExample {
  std::string response_id;
  features::FeatureVector features;
  double consensus = 0.0;
  std::optional<DemographicRecord> demographics;
};

struct Dataset {
  std::vector<LabeledExample> examples;
  std::vector<RejectedResponse> rejected;
};

// Joins consensus labels with extracted features. Responses without a
// consensus label, or whose prompt is unknown, are rejected with a reason.
absl::StatusOr<Dataset> BuildDataset(
    const std::vector<features::WritingResponse>& responses,
    const std::map<std::string, std::string>& prompts,
    const ConsensusResult& consensus,
    const features::FeatureResources& resources);

}  // namespace assesskit::scoring

#endif  // ASSESSKIT_SCORING_RATINGS_H_
