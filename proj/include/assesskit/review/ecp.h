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

#ifndef ASSESSKIT_REVIEW_ECP_H_
#define ASSESSKIT_REVIEW_ECP_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace assesskit::review {

enum class EcpStatus { kDraft, kApproved, kLaunched };
std::string_view EcpStatusName(EcpStatus status);

struct EcpApproval {
  std::string approver_id;
  std::string role;
  int64_t timestamp_ms = 0;
  bool operator==(const EcpApproval&) const = default;
};

// Exam change proposal.
struct EcpRecord {
  std::string ecp_id;
  std::string description;
  std::vector<std::string> evidence;        // ids of reports and results
  std::vector<std::string> required_roles;  // sorted, distinct
  std::vector<EcpApproval> approvals;
  EcpStatus status = EcpStatus::kDraft;
  // Scorer changes name the model artifact version they activate.
  std::string model_version;
  int64_t created_ms = 0;
  int64_t launched_ms = 0;

  bool operator==(const EcpRecord&) const = default;
};

absl::StatusOr<EcpRecord> RecordEcp(std::string ecp_id, std::string description,
                                    std::vector<std::string> evidence,
                                    std::vector<std::string> required_roles,
                                    std::string model_version, int64_t now_ms);

// Required roles without an approval, sorted.
std::vector<std::string> MissingRoles(const EcpRecord& record);

// A second approval for an already-approved role changes nothing. One
// approver may fill only one role.
absl::Status ApproveEcp(EcpRecord& record, const std::string& approver_id,
                        const std::string& role, int64_t now_ms);

// Requires every role approved. `others` are the remaining ECPs; a model
// version may be launched by only one of them.
absl::Status LaunchEcp(EcpRecord& record, const std::vector<EcpRecord>& others,
                       int64_t now_ms);

nlohmann::json ToJson(const EcpRecord& record);
absl::StatusOr<EcpRecord> EcpFromJson(const nlohmann::json& j);

}  // namespace assesskit::review

#endif  // ASSESSKIT_REVIEW_ECP_H_
