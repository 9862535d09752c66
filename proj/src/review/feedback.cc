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

#include "assesskit/review/feedback.h"

namespace assesskit::review {
namespace {

using nlohmann::json;

void Finish(RateStats& s) {
  s.rejection_rate =
      s.decisions == 0 ? 0.0 : static_cast<double>(s.rejections) / s.decisions;
}

json RateJson(const RateStats& s) {
  return {{"decisions", s.decisions},
          {"rejections", s.rejections},
          {"rejection_rate", s.rejection_rate}};
}

}  // namespace

FeedbackReport BuildFeedbackReport(const std::vector<ReviewEntry>& entries,
                                   const std::vector<SurveyNote>& surveys,
                                   const TimeWindow& window,
                                   double attention_threshold) {
  FeedbackReport report;
  report.window = window;
  report.attention_threshold = attention_threshold;
  for (const auto& entry : entries) {
    if (entry.subject.kind != SubjectKind::kItemDraft) continue;
    for (const auto& d : entry.history) {
      if (!window.Contains(d.timestamp_ms)) continue;
      const bool rejected = d.verdict == Verdict::kReject;
      TemplateStats& t = report.per_template[entry.subject.template_id];
      RateStats& k = report.per_item_kind[entry.subject.item_kind];
      ++report.total_decisions;
      ++t.rates.decisions;
      ++k.decisions;
      if (!rejected) continue;
      ++report.total_rejections;
      ++t.rates.rejections;
      ++k.rejections;
      for (const auto& code : d.reason_codes) {
        ++t.reason_counts[code];
        ++report.reason_totals[code];
      }
    }
  }
  for (auto& [id, t] : report.per_template) {
    Finish(t.rates);
    if (t.rates.rejection_rate > attention_threshold) report.attention.push_back(id);
  }
  for (auto& [kind, k] : report.per_item_kind) Finish(k);
  for (const auto& note : surveys) {
    if (window.Contains(note.timestamp_ms)) report.surveys.push_back(note);
  }
  return report;
}

json ToJson(const FeedbackReport& report) {
  json per_template = json::object();
  for (const auto& [id, t] : report.per_template) {
    json entry = RateJson(t.rates);
    entry["reason_counts"] = t.reason_counts;
    per_template[id] = std::move(entry);
  }
  json per_kind = json::object();
  for (const auto& [kind, k] : report.per_item_kind) per_kind[kind] = RateJson(k);
  json surveys = json::array();
  for (const auto& s : report.surveys) {
    surveys.push_back({{"note_id", s.note_id},
                       {"timestamp_ms", s.timestamp_ms},
                       {"template_id", s.template_id},
                       {"text", s.text}});
  }
  return {{"window", {{"from_ms", report.window.from_ms}, {"to_ms", report.window.to_ms}}},
          {"total_decisions", report.total_decisions},
          {"total_rejections", report.total_rejections},
          {"per_template", std::move(per_template)},
          {"per_item_kind", std::move(per_kind)},
          {"reason_totals", report.reason_totals},
          {"attention", report.attention},
          {"attention_threshold", report.attention_threshold},
          {"surveys", std::move(surveys)}};
}

}  // namespace assesskit::review
