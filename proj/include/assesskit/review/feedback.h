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

#ifndef ASSESSKIT_REVIEW_FEEDBACK_H_
#define ASSESSKIT_REVIEW_FEEDBACK_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "assesskit/review/workflow.h"
#include "json.hpp"

namespace assesskit::review {

// Half-open [from_ms, to_ms).
struct TimeWindow {
  int64_t from_ms = 0;
  int64_t to_ms = 0;
  bool Contains(int64_t t) const { return t >= from_ms && t < to_ms; }
};

// Free-text test-taker survey comment.
struct SurveyNote {
  std::string note_id;
  int64_t timestamp_ms = 0;
  std::string template_id;  // optional
  std::string text;
};

struct RateStats {
  int decisions = 0;
  int rejections = 0;
  double rejection_rate = 0.0;  // 0 when there are no decisions
};

struct TemplateStats {
  RateStats rates;
  // Each rejection counts each of its distinct reason codes once, so these
  // can exceed `rates.rejections` when a rejection carries several codes.
  std::map<std::string, int> reason_counts;
};

struct FeedbackReport {
  TimeWindow window;
  int total_decisions = 0;
  int total_rejections = 0;
  std::map<std::string, TemplateStats> per_template;
  std::map<std::string, RateStats> per_item_kind;
  std::map<std::string, int> reason_totals;
  // Templates whose rejection rate exceeds the threshold, sorted.
  std::vector<std::string> attention;
  double attention_threshold = 0.0;
  std::vector<SurveyNote> surveys;
};

// Rejection rate above which a template is recommended for attention.
inline constexpr double kDefaultAttentionThreshold = 0.5;

// Tallies item-draft decisions timestamped inside the window. A rejection is
// a reject verdict at either stage.
FeedbackReport BuildFeedbackReport(const std::vector<ReviewEntry>& entries,
                                   const std::vector<SurveyNote>& surveys,
                                   const TimeWindow& window,
                                   double attention_threshold);

nlohmann::json ToJson(const FeedbackReport& report);

}  // namespace assesskit::review

#endif  // ASSESSKIT_REVIEW_FEEDBACK_H_
