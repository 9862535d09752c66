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

#ifndef ASSESSKIT_MONITOR_MONITOR_H_
#define ASSESSKIT_MONITOR_MONITOR_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/common/demographics.h"
#include "assesskit/review/queue.h"
#include "json.hpp"

namespace assesskit::monitor {

inline constexpr double kPsiFloor = 1e-4;

struct SessionRecord {
  std::string session_id;
  int week = 0;
  double total_score = 0.0;
  DemographicRecord demographics;
  std::vector<std::string> item_exposures;
  bool repeater = false;
  std::optional<double> prior_score;
};

// JSON lines. Week indices must not decrease along the stream; demographics
// must come from the vocabulary; repeaters need a prior score.
absl::StatusOr<std::vector<SessionRecord>> ParseSessions(
    std::string_view jsonl, const DemographicVocabulary& vocab = {});
nlohmann::json ToJson(const SessionRecord& session);

// dimension ("gender", "l1") -> category -> proportion
using Mix = std::map<std::string, std::map<std::string, double>>;

// Category proportions over every vocabulary category, zeros included.
// Empty input gives an empty mix.
Mix DemographicMix(const std::vector<SessionRecord>& sessions,
                   const DemographicVocabulary& vocab = {});

// PSI = sum (p_cur - p_base) ln(p_cur / p_base) with both proportions
// floored at kPsiFloor. Category sets must match.
absl::StatusOr<double> PopulationStabilityIndex(const std::map<std::string, double>& current,
                                                const std::map<std::string, double>& baseline);
absl::StatusOr<std::map<std::string, double>> DemographicShift(const Mix& current,
                                                               const Mix& baseline);

// Secondary statistic: n * sum (p_cur - p_base)^2 / p_base, baseline
// floored at kPsiFloor.
absl::StatusOr<double> ChiSquareShift(const std::map<std::string, double>& current,
                                      const std::map<std::string, double>& baseline,
                                      int64_t n);

struct ExposureRate {
  std::string item_id;
  int64_t sessions = 0;
  double rate = 0.0;
};

struct Alert {
  std::string rule_id;
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  std::string direction;
  bool open_review = false;
};

struct MonitorReport {
  int week = 0;
  int64_t volume = 0;
  // Absent for an empty week; sd (sample, n - 1) also absent when n < 2.
  std::optional<double> score_mean;
  std::optional<double> score_sd;
  Mix mix;
  // Per dimension, against the baseline; empty without a baseline or
  // sessions.
  std::map<std::string, double> psi;
  // Every exposed item, rate descending then id.
  std::vector<ExposureRate> exposure;
  std::optional<double> mean_repeater_gain;
  int64_t repeaters = 0;
  std::vector<Alert> alerts;
};

struct MonitorOptions {
  // Items kept in the report's exposure list; 0 keeps all.
  size_t top_exposure = 10;
  DemographicVocabulary vocab;
};

// Uses only the sessions of the given week.
absl::StatusOr<MonitorReport> ComputeWindow(const std::vector<SessionRecord>& sessions, int week,
                                            const std::optional<Mix>& baseline,
                                            const MonitorOptions& options = {});

enum class Direction { kAbove, kBelow };

// metric names: volume, score_mean, score_sd, repeater_gain, exposure.max,
// exposure.<item>, psi.<dimension>, mix.<dimension>.<category>.
struct AlertRule {
  std::string rule_id;
  std::string metric;
  double threshold = 0.0;
  Direction direction = Direction::kAbove;
  bool open_review = false;
};

absl::StatusOr<std::vector<AlertRule>> ParseAlertRules(const nlohmann::json& json);
std::optional<double> MetricValue(const MonitorReport& report, std::string_view metric);

// One alert per breached rule (strictly above or below the threshold);
// rules on absent metrics never fire.
std::vector<Alert> EvaluateAlerts(const MonitorReport& report,
                                  const std::vector<AlertRule>& rules);

// ComputeWindow followed by EvaluateAlerts; the report carries the alerts.
absl::StatusOr<MonitorReport> RunWeek(const std::vector<SessionRecord>& sessions, int week,
                                      const std::optional<Mix>& baseline,
                                      const std::vector<AlertRule>& rules,
                                      const MonitorOptions& options = {});

// Opens a pending_fab monitor_alert entry for each alert with open_review.
// ref_id is "week-<w>/<rule_id>".
absl::StatusOr<std::vector<review::ReviewEntry>> OpenAlertReviews(
    const MonitorReport& report, review::ReviewQueue& queue,
    const std::function<std::string()>& next_id, int64_t now_ms);

nlohmann::json ToJson(const MonitorReport& report);
nlohmann::json ToJson(const Mix& mix);
absl::StatusOr<Mix> MixFromJson(const nlohmann::json& json);
// Plain text summary for operators.
std::string Summary(const MonitorReport& report);

}  // namespace assesskit::monitor

#endif  // ASSESSKIT_MONITOR_MONITOR_H_
