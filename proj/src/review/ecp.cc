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

#include "assesskit/review/ecp.h"

#include <algorithm>

#include "assesskit/common/strings.h"

namespace assesskit::review {

using nlohmann::json;

std::string_view EcpStatusName(EcpStatus status) {
  switch (status) {
    case EcpStatus::kDraft:
      return "draft";
    case EcpStatus::kApproved:
      return "approved";
    case EcpStatus::kLaunched:
      return "launched";
  }
  return "unknown";
}

absl::StatusOr<EcpRecord> RecordEcp(std::string ecp_id, std::string description,
                                    std::vector<std::string> evidence,
                                    std::vector<std::string> required_roles,
                                    std::string model_version, int64_t now_ms) {
  if (ecp_id.empty()) return absl::InvalidArgumentError("ecp_id is required");
  if (description.empty()) return absl::InvalidArgumentError("description is required");
  std::sort(required_roles.begin(), required_roles.end());
  required_roles.erase(std::unique(required_roles.begin(), required_roles.end()),
                       required_roles.end());
  if (required_roles.empty() || required_roles.front().empty()) {
    return absl::InvalidArgumentError("at least one non-empty required role is needed");
  }
  EcpRecord record;
  record.ecp_id = std::move(ecp_id);
  record.description = std::move(description);
  record.evidence = std::move(evidence);
  record.required_roles = std::move(required_roles);
  record.model_version = std::move(model_version);
  record.created_ms = now_ms;
  return record;
}

std::vector<std::string> MissingRoles(const EcpRecord& record) {
  std::vector<std::string> missing;
  for (const auto& role : record.required_roles) {
    const bool have = std::any_of(record.approvals.begin(), record.approvals.end(),
                                  [&](const EcpApproval& a) { return a.role == role; });
    if (!have) missing.push_back(role);
  }
  return missing;
}

absl::Status ApproveEcp(EcpRecord& record, const std::string& approver_id,
                        const std::string& role, int64_t now_ms) {
  if (approver_id.empty()) return absl::InvalidArgumentError("approver_id is required");
  if (record.status == EcpStatus::kLaunched) {
    return absl::FailedPreconditionError(
        StrCat("ECP '", record.ecp_id, "' is already launched"));
  }
  if (std::find(record.required_roles.begin(), record.required_roles.end(), role) ==
      record.required_roles.end()) {
    return absl::InvalidArgumentError(
        StrCat("role '", role, "' is not required by ECP '", record.ecp_id, "'"));
  }
  for (const auto& a : record.approvals) {
    if (a.role == role) return absl::OkStatus();
    if (a.approver_id == approver_id) {
      return absl::PermissionDeniedError(StrCat(
          "'", approver_id, "' already approved as '", a.role, "'"));
    }
  }
  record.approvals.push_back({approver_id, role, now_ms});
  if (MissingRoles(record).empty()) record.status = EcpStatus::kApproved;
  return absl::OkStatus();
}

absl::Status LaunchEcp(EcpRecord& record, const std::vector<EcpRecord>& others,
                       int64_t now_ms) {
  if (record.status == EcpStatus::kLaunched) {
    return absl::FailedPreconditionError(
        StrCat("ECP '", record.ecp_id, "' is already launched"));
  }
  const std::vector<std::string> missing = MissingRoles(record);
  if (!missing.empty()) {
    return absl::FailedPreconditionError(
        StrCat("ECP '", record.ecp_id, "' lacks approval from: ", Join(missing, ", ")));
  }
  if (!record.model_version.empty()) {
    for (const auto& other : others) {
      if (other.ecp_id != record.ecp_id && other.status == EcpStatus::kLaunched &&
          other.model_version == record.model_version) {
        return absl::FailedPreconditionError(
            StrCat("model version '", record.model_version,
                   "' was already launched by ECP '", other.ecp_id, "'"));
      }
    }
  }
  record.status = EcpStatus::kLaunched;
  record.launched_ms = now_ms;
  return absl::OkStatus();
}

json ToJson(const EcpRecord& record) {
  json approvals = json::array();
  for (const auto& a : record.approvals) {
    approvals.push_back({{"approver_id", a.approver_id},
                         {"role", a.role},
                         {"timestamp_ms", a.timestamp_ms}});
  }
  return {{"ecp_id", record.ecp_id},
          {"description", record.description},
          {"evidence", record.evidence},
          {"required_roles", record.required_roles},
          {"approvals", std::move(approvals)},
          {"missing_roles", MissingRoles(record)},
          {"status", EcpStatusName(record.status)},
          {"model_version", record.model_version},
          {"created_ms", record.created_ms},
          {"launched_ms", record.launched_ms}};
}

absl::StatusOr<EcpRecord> EcpFromJson(const json& j) {
  try {
    EcpRecord r;
    r.ecp_id = j.at("ecp_id").get<std::string>();
    r.description = j.at("description").get<std::string>();
    r.evidence = j.at("evidence").get<std::vector<std::string>>();
    r.required_roles = j.at("required_roles").get<std::vector<std::string>>();
    for (const json& a : j.at("approvals")) {
      r.approvals.push_back({a.at("approver_id").get<std::string>(),
                             a.at("role").get<std::string>(),
                             a.at("timestamp_ms").get<int64_t>()});
    }
    const std::string status = j.at("status").get<std::string>();
    if (status == "draft") {
      r.status = EcpStatus::kDraft;
    } else if (status == "approved") {
      r.status = EcpStatus::kApproved;
    } else if (status == "launched") {
      r.status = EcpStatus::kLaunched;
    } else {
      return absl::InvalidArgumentError(StrCat("unknown ECP status '", status, "'"));
    }
    r.model_version = j.value("model_version", "");
    r.created_ms = j.at("created_ms").get<int64_t>();
    r.launched_ms = j.value("launched_ms", int64_t{0});
    return r;
  } catch (const json::exception& ex) {
    return absl::InvalidArgumentError(StrCat("malformed ECP record: ", ex.what()));
  }
}

}  // namespace assesskit::review
