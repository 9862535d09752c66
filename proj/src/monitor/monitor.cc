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

#include "assesskit/monitor/monitor.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"

namespace assesskit::monitor {
namespace {

constexpr std::string_view kGender = "gender";
constexpr std::string_view kL1 = "l1";

absl::Status SameCategories(const std::map<std::string, double>& a,
                            const std::map<std::string, double>& b) {
  if (a.size() == b.size() &&
      std::equal(a.begin(), a.end(), b.begin(),
                 [](const auto& x, const auto& y) { return x.first == y.first; })) {
    return absl::OkStatus();
  }
  std::vector<std::string> ka, kb;
  for (const auto& [k, v] : a) ka.push_back(k);
  for (const auto& [k, v] : b) kb.push_back(k);
  return absl::InvalidArgumentError(StrCat("category sets differ: {", Join(ka, ", "),
                                           "} vs {", Join(kb, ", "), "}"));
}

std::string_view DirectionName(Direction d) { return d == Direction::kAbove ? "above" : "below"; }

}  // namespace

absl::StatusOr<std::vector<SessionRecord>> ParseSessions(std::string_view jsonl,
                                                         const DemographicVocabulary& vocab) {
  std::vector<SessionRecord> out;
  size_t line_number = 0;
  int last_week = 0;
  for (std::string_view line : Split(jsonl, '\n')) {
    ++line_number;
    line = Trim(line);
    if (line.empty()) continue;
    auto fail = [&](std::string_view what) {
      return absl::InvalidArgumentError(StrCat("sessions line ", line_number, ": ", what));
    };
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return fail("not a JSON object");
    SessionRecord s;
    try {
      s.session_id = j.at("session_id").get<std::string>();
      s.week = j.at("week").get<int>();
      s.total_score = j.at("total_score").get<double>();
      const auto& demo = j.at("demographics");
      s.demographics = {demo.at("gender").get<std::string>(), demo.at("l1").get<std::string>()};
      if (j.contains("item_exposures")) {
        s.item_exposures = j["item_exposures"].get<std::vector<std::string>>();
      }
      s.repeater = j.value("repeater", false);
      if (j.contains("prior_score") && !j["prior_score"].is_null()) {
        s.prior_score = j["prior_score"].get<double>();
      }
    } catch (const nlohmann::json::exception& e) {
      return fail(e.what());
    }
    if (!std::isfinite(s.total_score)) return fail("total_score must be finite");
    if (!out.empty() && s.week < last_week) {
      return fail(StrCat("week ", s.week, " after week ", last_week,
                         "; weeks must not decrease along the stream"));
    }
    if (s.repeater && !s.prior_score) return fail("repeater without prior_score");
    if (absl::Status st = vocab.Validate(s.demographics); !st.ok()) {
      return fail(StrCat("session ", s.session_id, ": ", st.message()));
    }
    last_week = s.week;
    out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json ToJson(const SessionRecord& s) {
  nlohmann::json j = {{"session_id", s.session_id},
                      {"week", s.week},
                      {"total_score", s.total_score},
                      {"demographics", {{"gender", s.demographics.gender}, {"l1", s.demographics.l1}}},
                      {"item_exposures", s.item_exposures},
                      {"repeater", s.repeater}};
  if (s.prior_score) j["prior_score"] = *s.prior_score;
  return j;
}

Mix DemographicMix(const std::vector<SessionRecord>& sessions,
                   const DemographicVocabulary& vocab) {
  Mix mix;
  if (sessions.empty()) return mix;
  auto& gender = mix[std::string(kGender)];
  auto& l1 = mix[std::string(kL1)];
  for (const auto& g : vocab.genders) gender[g] = 0.0;
  for (const auto& c : vocab.l1s) l1[c] = 0.0;
  for (const auto& s : sessions) {
    gender[s.demographics.gender] += 1.0;
    l1[s.demographics.l1] += 1.0;
  }
  const double n = static_cast<double>(sessions.size());
  for (auto& [dim, cats] : mix) {
    for (auto& [cat, v] : cats) v /= n;
  }
  return mix;
}

absl::StatusOr<double> PopulationStabilityIndex(const std::map<std::string, double>& current,
                                                const std::map<std::string, double>& baseline) {
  RETURN_IF_ERROR(SameCategories(current, baseline));
  double psi = 0.0;
  for (const auto& [cat, p_raw] : current) {
    const double p = std::max(p_raw, kPsiFloor);
    const double q = std::max(baseline.at(cat), kPsiFloor);
    psi += (p - q) * std::log(p / q);
  }
  return psi;
}

absl::StatusOr<std::map<std::string, double>> DemographicShift(const Mix& current,
                                                               const Mix& baseline) {
  std::map<std::string, double> out;
  for (const auto& [dim, cats] : current) {
    const auto it = baseline.find(dim);
    if (it == baseline.end()) {
      return absl::InvalidArgumentError(StrCat("baseline lacks dimension ", dim));
    }
    auto psi = PopulationStabilityIndex(cats, it->second);
    if (!psi.ok()) {
      return absl::InvalidArgumentError(StrCat("dimension ", dim, ": ", psi.status().message()));
    }
    out[dim] = *psi;
  }
  return out;
}

absl::StatusOr<double> ChiSquareShift(const std::map<std::string, double>& current,
                                      const std::map<std::string, double>& baseline, int64_t n) {
  RETURN_IF_ERROR(SameCategories(current, baseline));
  double chi = 0.0;
  for (const auto& [cat, p] : current) {
    const double q = std::max(baseline.at(cat), kPsiFloor);
    chi += (p - q) * (p - q) / q;
  }
  return static_cast<double>(n) * chi;
}

absl::StatusOr<MonitorReport> ComputeWindow(const std::vector<SessionRecord>& all, int week,
                                            const std::optional<Mix>& baseline,
                                            const MonitorOptions& options) {
  std::vector<SessionRecord> sessions;
  for (const auto& s : all) {
    if (s.week == week) sessions.push_back(s);
  }
  MonitorReport r;
  r.week = week;
  r.volume = static_cast<int64_t>(sessions.size());
  if (sessions.empty()) return r;

  const double n = static_cast<double>(sessions.size());
  double sum = 0.0;
  for (const auto& s : sessions) sum += s.total_score;
  r.score_mean = sum / n;
  if (sessions.size() >= 2) {
    double ss = 0.0;
    for (const auto& s : sessions) ss += (s.total_score - *r.score_mean) * (s.total_score - *r.score_mean);
    r.score_sd = std::sqrt(ss / (n - 1.0));
  }
  r.mix = DemographicMix(sessions, options.vocab);
  if (baseline) {
    ASSIGN_OR_RETURN(r.psi, DemographicShift(r.mix, *baseline));
  }
  std::map<std::string, int64_t> exposed;
  for (const auto& s : sessions) {
    const std::set<std::string> distinct(s.item_exposures.begin(), s.item_exposures.end());
    for (const auto& item : distinct) ++exposed[item];
  }
  for (const auto& [item, count] : exposed) {
    r.exposure.push_back({item, count, static_cast<double>(count) / n});
  }
  std::sort(r.exposure.begin(), r.exposure.end(), [](const ExposureRate& a, const ExposureRate& b) {
    if (a.sessions != b.sessions) return a.sessions > b.sessions;
    return a.item_id < b.item_id;
  });
  if (options.top_exposure > 0 && r.exposure.size() > options.top_exposure) {
    r.exposure.resize(options.top_exposure);
  }
  double gain = 0.0;
  for (const auto& s : sessions) {
    if (!s.repeater || !s.prior_score) continue;
    gain += s.total_score - *s.prior_score;
    ++r.repeaters;
  }
  if (r.repeaters > 0) r.mean_repeater_gain = gain / static_cast<double>(r.repeaters);
  return r;
}

absl::StatusOr<std::vector<AlertRule>> ParseAlertRules(const nlohmann::json& json) {
  const nlohmann::json& list = json.is_object() && json.contains("rules") ? json["rules"] : json;
  if (!list.is_array()) return absl::InvalidArgumentError("alert rules must be a JSON array");
  std::vector<AlertRule> rules;
  std::set<std::string> ids;
  for (size_t i = 0; i < list.size(); ++i) {
    const auto& j = list[i];
    AlertRule rule;
    try {
      rule.metric = j.at("metric").get<std::string>();
      rule.rule_id = j.value("rule_id", StrCat("rule-", i + 1));
      rule.threshold = j.at("threshold").get<double>();
      const std::string direction = j.value("direction", "above");
      if (direction != "above" && direction != "below") {
        return absl::InvalidArgumentError(
            StrCat("rule ", rule.rule_id, ": direction must be above or below"));
      }
      rule.direction = direction == "above" ? Direction::kAbove : Direction::kBelow;
      rule.open_review = j.value("open_review", false);
      for (const auto& [key, value] : j.items()) {
        if (key != "metric" && key != "rule_id" && key != "threshold" && key != "direction" &&
            key != "open_review") {
          return absl::InvalidArgumentError(StrCat("rule ", rule.rule_id, ": unknown key ", key));
        }
      }
    } catch (const nlohmann::json::exception& e) {
      return absl::InvalidArgumentError(StrCat("alert rule ", i + 1, ": ", e.what()));
    }
    if (!ids.insert(rule.rule_id).second) {
      return absl::InvalidArgumentError(StrCat("duplicate rule id ", rule.rule_id));
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::optional<double> MetricValue(const MonitorReport& r, std::string_view metric) {
  if (metric == "volume") return static_cast<double>(r.volume);
  if (metric == "score_mean") return r.score_mean;
  if (metric == "score_sd") return r.score_sd;
  if (metric == "repeater_gain") return r.mean_repeater_gain;
  if (metric == "exposure.max") {
    if (r.exposure.empty()) return std::nullopt;
    return r.exposure.front().rate;
  }
  if (metric.rfind("exposure.", 0) == 0) {
    const std::string_view item = metric.substr(9);
    for (const auto& e : r.exposure) {
      if (e.item_id == item) return e.rate;
    }
    return std::nullopt;
  }
  if (metric.rfind("psi.", 0) == 0) {
    const auto it = r.psi.find(std::string(metric.substr(4)));
    if (it == r.psi.end()) return std::nullopt;
    return it->second;
  }
  if (metric.rfind("mix.", 0) == 0) {
    const std::string_view rest = metric.substr(4);
    const size_t dot = rest.find('.');
    if (dot == std::string_view::npos) return std::nullopt;
    const auto dim = r.mix.find(std::string(rest.substr(0, dot)));
    if (dim == r.mix.end()) return std::nullopt;
    const auto cat = dim->second.find(std::string(rest.substr(dot + 1)));
    if (cat == dim->second.end()) return std::nullopt;
    return cat->second;
  }
  return std::nullopt;
}

std::vector<Alert> EvaluateAlerts(const MonitorReport& report,
                                  const std::vector<AlertRule>& rules) {
  std::vector<Alert> alerts;
  for (const auto& rule : rules) {
    const std::optional<double> value = MetricValue(report, rule.metric);
    if (!value) continue;
    const bool breached =
        rule.direction == Direction::kAbove ? *value > rule.threshold : *value < rule.threshold;
    if (!breached) continue;
    alerts.push_back({rule.rule_id, rule.metric, *value, rule.threshold,
                      std::string(DirectionName(rule.direction)), rule.open_review});
  }
  return alerts;
}

absl::StatusOr<MonitorReport> RunWeek(const std::vector<SessionRecord>& sessions, int week,
                                      const std::optional<Mix>& baseline,
                                      const std::vector<AlertRule>& rules,
                                      const MonitorOptions& options) {
  ASSIGN_OR_RETURN(MonitorReport report, ComputeWindow(sessions, week, baseline, options));
  report.alerts = EvaluateAlerts(report, rules);
  return report;
}

absl::StatusOr<std::vector<review::ReviewEntry>> OpenAlertReviews(
    const MonitorReport& report, review::ReviewQueue& queue,
    const std::function<std::string()>& next_id, int64_t now_ms) {
  std::vector<review::ReviewEntry> created;
  for (const auto& a : report.alerts) {
    if (!a.open_review) continue;
    review::Subject subject;
    subject.kind = review::SubjectKind::kMonitorAlert;
    subject.ref_id = StrCat("week-", report.week, "/", a.rule_id);
    subject.attachments = {{"metric", a.metric},
                           {"value", a.value},
                           {"threshold", a.threshold},
                           {"direction", a.direction},
                           {"week", report.week}};
    ASSIGN_OR_RETURN(review::ReviewEntry entry,
                     queue.Enqueue(next_id(), std::move(subject), now_ms));
    created.push_back(std::move(entry));
  }
  return created;
}

nlohmann::json ToJson(const Mix& mix) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [dim, cats] : mix) {
    for (const auto& [cat, v] : cats) j[dim][cat] = v;
  }
  return j;
}

absl::StatusOr<Mix> MixFromJson(const nlohmann::json& json) {
  if (!json.is_object()) return absl::InvalidArgumentError("mix must be an object");
  Mix mix;
  for (const auto& [dim, cats] : json.items()) {
    if (!cats.is_object()) {
      return absl::InvalidArgumentError(StrCat("mix dimension ", dim, " must be an object"));
    }
    double total = 0.0;
    for (const auto& [cat, v] : cats.items()) {
      if (!v.is_number() || v.get<double>() < 0.0) {
        return absl::InvalidArgumentError(StrCat("mix ", dim, ".", cat, " must be >= 0"));
      }
      mix[dim][cat] = v.get<double>();
      total += v.get<double>();
    }
    if (std::abs(total - 1.0) > 1e-9) {
      return absl::InvalidArgumentError(StrCat("mix dimension ", dim, " sums to ", total));
    }
  }
  return mix;
}

nlohmann::json ToJson(const MonitorReport& r) {
  auto optional = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json j = {{"week", r.week},
                      {"volume", r.volume},
                      {"score_mean", optional(r.score_mean)},
                      {"score_sd", optional(r.score_sd)},
                      {"mix", ToJson(r.mix)},
                      {"psi", r.psi},
                      {"exposure", nlohmann::json::array()},
                      {"mean_repeater_gain", optional(r.mean_repeater_gain)},
                      {"repeaters", r.repeaters},
                      {"alerts", nlohmann::json::array()}};
  for (const auto& e : r.exposure) {
    j["exposure"].push_back({{"item_id", e.item_id}, {"sessions", e.sessions}, {"rate", e.rate}});
  }
  for (const auto& a : r.alerts) {
    j["alerts"].push_back({{"rule_id", a.rule_id},
                           {"metric", a.metric},
                           {"value", a.value},
                           {"threshold", a.threshold},
                           {"direction", a.direction},
                           {"open_review", a.open_review}});
  }
  return j;
}

std::string Summary(const MonitorReport& r) {
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("absent");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  std::string out = StrCat("week ", r.week, ": ", r.volume, " sessions\n");
  out += StrCat("  score mean ", fmt(r.score_mean), ", sd ", fmt(r.score_sd), "\n");
  for (const auto& [dim, psi] : r.psi) out += StrCat("  psi ", dim, " ", fmt(psi), "\n");
  if (!r.exposure.empty()) {
    out += StrCat("  most exposed ", r.exposure.front().item_id, " at ",
                  fmt(r.exposure.front().rate), "\n");
  }
  out += StrCat("  repeaters ", r.repeaters, ", mean gain ", fmt(r.mean_repeater_gain), "\n");
  if (r.alerts.empty()) {
    out += "  no alerts\n";
  } else {
    for (const auto& a : r.alerts) {
      out += StrCat("  ALERT ", a.rule_id, ": ", a.metric, " = ", fmt(a.value), " ", a.direction,
                    " ", fmt(a.threshold), "\n");
    }
  }
  return out;
}

}  // namespace assesskit::monitor
