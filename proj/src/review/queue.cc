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

#include "assesskit/review/queue.h"

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"

namespace assesskit::review {

absl::StatusOr<ReviewEntry> ReviewQueue::Enqueue(const std::string& entry_id,
                                                 Subject subject, int64_t now_ms) {
  if (entry_id.empty()) return absl::InvalidArgumentError("entry_id is required");
  if (subject.kind == SubjectKind::kPlagiarismFlag &&
      subject.classification != "suspect") {
    return absl::FailedPreconditionError(
        StrCat("plagiarism flag '", subject.ref_id, "' is ",
               subject.classification.empty() ? "unclassified" : subject.classification,
               "; only suspect flags are queued"));
  }
  ReviewEntry entry;
  entry.entry_id = entry_id;
  entry.subject = std::move(subject);
  entry.created_ms = now_ms;
  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.contains(entry_id)) {
    return absl::AlreadyExistsError(StrCat("entry '", entry_id, "' exists"));
  }
  entries_.emplace(entry_id, entry);
  return entry;
}

absl::Status ReviewQueue::Restore(ReviewEntry entry) {
  ASSIGN_OR_RETURN(ReviewState replayed,
                   ReplayHistory(entry.subject.kind, entry.history));
  if (replayed != entry.state) {
    return absl::DataLossError(StrCat("entry '", entry.entry_id,
                                      "' state disagrees with its history"));
  }
  std::lock_guard<std::mutex> lock(mu_);
  entries_[entry.entry_id] = std::move(entry);
  return absl::OkStatus();
}

bool ReviewQueue::Eligible(const ReviewEntry& entry, const std::string& reviewer_id,
                           Stage stage) const {
  if (StageOf(entry.state) != stage) return false;
  if (entry.subject.author_id == reviewer_id) return false;
  if (stage == Stage::kIqr) {
    for (const auto& d : entry.history) {
      if (d.from == ReviewState::kPendingFab && d.reviewer_id == reviewer_id) {
        return false;
      }
    }
  }
  auto claim = claims_.find(entry.entry_id);
  return claim == claims_.end() || claim->second == reviewer_id;
}

void ReviewQueue::Clear() {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.clear();
  claims_.clear();
}

absl::StatusOr<ReviewEntry> ReviewQueue::NextFor(const std::string& reviewer_id,
                                                 Stage stage) {
  if (reviewer_id.empty()) return absl::InvalidArgumentError("reviewer_id is required");
  std::lock_guard<std::mutex> lock(mu_);
  // A reviewer's existing claim comes first.
  for (const auto& [id, reviewer] : claims_) {
    if (reviewer != reviewer_id) continue;
    const ReviewEntry& entry = entries_.at(id);
    if (Eligible(entry, reviewer_id, stage)) return entry;
  }
  for (const auto& [id, entry] : entries_) {
    if (Eligible(entry, reviewer_id, stage)) {
      claims_[id] = reviewer_id;
      return entry;
    }
  }
  return absl::NotFoundError(StrCat("no ", StageName(stage), " entry available for '",
                                    reviewer_id, "'"));
}

absl::Status ReviewQueue::Release(const std::string& entry_id,
                                  const std::string& reviewer_id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto claim = claims_.find(entry_id);
  if (claim == claims_.end() || claim->second != reviewer_id) {
    return absl::NotFoundError(StrCat("'", reviewer_id, "' holds no claim on '",
                                      entry_id, "'"));
  }
  claims_.erase(claim);
  return absl::OkStatus();
}

absl::StatusOr<ReviewEntry> ReviewQueue::Decide(const std::string& entry_id,
                                                ReviewDecision decision,
                                                std::optional<int> expected_version) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(entry_id);
  if (it == entries_.end()) {
    return absl::NotFoundError(StrCat("no review entry '", entry_id, "'"));
  }
  ReviewEntry& entry = it->second;
  if (expected_version.has_value() && *expected_version != entry.version) {
    return absl::AbortedError(StrCat("entry '", entry_id, "' is at version ",
                                     entry.version, ", expected ", *expected_version));
  }
  auto claim = claims_.find(entry_id);
  if (claim != claims_.end() && claim->second != decision.reviewer_id) {
    return absl::AbortedError(StrCat("entry '", entry_id, "' is claimed by '",
                                     claim->second, "'"));
  }
  // Apply on a copy so a rejected decision leaves the entry untouched.
  ReviewEntry updated = entry;
  RETURN_IF_ERROR(ApplyDecision(updated, std::move(decision), rules_));
  entry = std::move(updated);
  if (claim != claims_.end()) claims_.erase(claim);
  return entry;
}

absl::StatusOr<ReviewEntry> ReviewQueue::Adjudicate(
    const std::string& entry_id, const std::string& proctor_id, bool confirm,
    std::vector<std::string> reason_codes, std::string note, int64_t now_ms,
    std::optional<int> expected_version) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(entry_id);
    if (it == entries_.end()) {
      return absl::NotFoundError(StrCat("no review entry '", entry_id, "'"));
    }
    const Subject& subject = it->second.subject;
    if (subject.kind != SubjectKind::kPlagiarismFlag) {
      return absl::FailedPreconditionError(
          StrCat("entry '", entry_id, "' is not a plagiarism flag"));
    }
    if (subject.classification != "suspect") {
      return absl::FailedPreconditionError(
          StrCat("flag '", subject.ref_id, "' is not suspect"));
    }
  }
  ReviewDecision decision;
  decision.reviewer_id = proctor_id;
  decision.verdict = confirm ? Verdict::kApprove : Verdict::kReject;
  decision.reason_codes = std::move(reason_codes);
  decision.note = std::move(note);
  decision.timestamp_ms = now_ms;
  return Decide(entry_id, std::move(decision), expected_version);
}

absl::StatusOr<ReviewEntry> ReviewQueue::Get(const std::string& entry_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(entry_id);
  if (it == entries_.end()) {
    return absl::NotFoundError(StrCat("no review entry '", entry_id, "'"));
  }
  return it->second;
}

std::vector<ReviewEntry> ReviewQueue::List(std::optional<ReviewState> state) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<ReviewEntry> out;
  for (const auto& [id, entry] : entries_) {
    if (!state.has_value() || entry.state == *state) out.push_back(entry);
  }
  return out;
}

std::set<std::string> ReviewQueue::MarkedSessions() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::set<std::string> sessions;
  for (const auto& [id, entry] : entries_) {
    if (entry.subject.kind == SubjectKind::kPlagiarismFlag &&
        entry.state == ReviewState::kApproved) {
      sessions.insert(entry.subject.session_id);
    }
  }
  return sessions;
}

}  // namespace assesskit::review
