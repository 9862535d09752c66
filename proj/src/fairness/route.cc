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

#include "assesskit/fairness/route.h"

#include "assesskit/common/status_macros.h"

namespace assesskit::fairness {

using nlohmann::json;

json ToJson(const MantelHaenszelResult& mh) {
  json j = {{"status", DifStatusName(mh.status)}, {"strata_used", mh.strata_used}};
  if (!mh.detail.empty()) j["detail"] = mh.detail;
  if (mh.status == DifStatus::kOk) {
    j["mh_chi_square"] = mh.chi_square;
    j["p_value"] = mh.p_value;
    j["common_odds_ratio"] = mh.common_odds_ratio;
    j["delta_mh"] = mh.delta;
    j["classification"] = DifClassName(mh.classification);
  }
  return j;
}

json ToJson(const LogisticDifResult& lr) {
  json j = {{"status", DifStatusName(lr.status)}};
  if (!lr.detail.empty()) j["detail"] = lr.detail;
  if (lr.status == DifStatus::kOk) {
    j["group_coefficient"] = lr.group_coefficient;
    j["group_standard_error"] = lr.group_standard_error;
    j["lr_uniform_chi_square"] = lr.lr_uniform_chi_square;
    j["lr_uniform_p"] = lr.lr_uniform_p;
    j["lr_nonuniform_chi_square"] = lr.lr_nonuniform_chi_square;
    j["lr_nonuniform_p"] = lr.lr_nonuniform_p;
  }
  return j;
}

json ToJson(const DifResult& result) {
  return {{"item_id", result.item_id},
          {"mantel_haenszel", ToJson(result.mh)},
          {"logistic", ToJson(result.logistic)}};
}

json ToJson(const DrfResult& result) {
  json groups = json::array();
  for (const auto& g : result.groups) {
    groups.push_back({{"group", g.group},
                      {"coefficient", g.coefficient},
                      {"standard_error", g.standard_error},
                      {"p_value", g.p_value},
                      {"flagged", g.flagged}});
  }
  return {{"scope", result.scope},
          {"status", DrfStatusName(result.status)},
          {"reference_group", result.reference_group},
          {"intercept", result.intercept},
          {"consensus_slope", result.consensus_slope},
          {"groups", std::move(groups)},
          {"flagged_groups", result.flagged_groups},
          {"n", result.n}};
}

absl::StatusOr<std::vector<review::ReviewEntry>> RouteFlags(
    const std::vector<DifResult>& dif, const std::vector<DrfResult>& drf,
    review::ReviewQueue& queue, const std::function<std::string()>& next_id,
    int64_t now_ms) {
  std::vector<review::ReviewEntry> created;
  for (const auto& r : dif) {
    if (r.mh.status != DifStatus::kOk || r.mh.classification != DifClass::kC) continue;
    review::Subject subject;
    subject.kind = review::SubjectKind::kDifFlag;
    subject.ref_id = r.item_id;
    subject.attachments = ToJson(r);
    ASSIGN_OR_RETURN(review::ReviewEntry entry,
                     queue.Enqueue(next_id(), std::move(subject), now_ms));
    created.push_back(std::move(entry));
  }
  for (const auto& r : drf) {
    if (r.status != DrfStatus::kOk) continue;
    for (const auto& g : r.groups) {
      if (!g.flagged) continue;
      review::Subject subject;
      subject.kind = review::SubjectKind::kDrfFlag;
      subject.ref_id = r.scope + "/" + g.group;
      subject.attachments = {{"scope", r.scope},
                             {"group", g.group},
                             {"reference_group", r.reference_group},
                             {"coefficient", g.coefficient},
                             {"standard_error", g.standard_error},
                             {"p_value", g.p_value}};
      ASSIGN_OR_RETURN(review::ReviewEntry entry,
                       queue.Enqueue(next_id(), std::move(subject), now_ms));
      created.push_back(std::move(entry));
    }
  }
  return created;
}

}  // namespace assesskit::fairness
