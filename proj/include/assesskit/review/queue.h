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

#ifndef ASSESSKIT_REVIEW_QUEUE_H_
#define ASSESSKIT_REVIEW_QUEUE_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/review/workflow.h"

namespace assesskit::review {

// Thread-safe set of review entries. Decisions are compare-and-set on the
// entry version; next_for claims an entry so that concurrent reviewers never
// receive the same one.
class ReviewQueue {
 public:
  explicit ReviewQueue(DecisionRules rules = {}) : rules_(std::move(rules)) {}

  // Entries are served in entry_id order. Benign plagiarism flags are
  // refused.
  absl::StatusOr<ReviewEntry> Enqueue(const std::string& entry_id, Subject subject,
                                      int64_t now_ms);
  // Drops every entry and claim.
  void Clear();
  // Loads a persisted entry after checking its history replays to its state.
  absl::Status Restore(ReviewEntry entry);

  // Oldest pending entry of the stage the reviewer may decide, claimed for
  // them. NotFound when nothing is available.
  absl::StatusOr<ReviewEntry> NextFor(const std::string& reviewer_id, Stage stage);
  absl::Status Release(const std::string& entry_id, const std::string& reviewer_id);

  // Aborted when expected_version is stale or another reviewer holds the
  // claim; FailedPrecondition on an illegal transition.
  absl::StatusOr<ReviewEntry> Decide(const std::string& entry_id,
                                     ReviewDecision decision,
                                     std::optional<int> expected_version = std::nullopt);

  // Proctor decision on a suspect plagiarism flag: confirm marks the session.
  absl::StatusOr<ReviewEntry> Adjudicate(const std::string& entry_id,
                                         const std::string& proctor_id, bool confirm,
                                         std::vector<std::string> reason_codes,
                                         std::string note, int64_t now_ms,
                                         std::optional<int> expected_version = std::nullopt);

  absl::StatusOr<ReviewEntry> Get(const std::string& entry_id) const;
  std::vector<ReviewEntry> List(std::optional<ReviewState> state = std::nullopt) const;
  // Sessions of confirmed plagiarism flags.
  std::set<std::string> MarkedSessions() const;

 private:
  bool Eligible(const ReviewEntry& entry, const std::string& reviewer_id,
                Stage stage) const;

  DecisionRules rules_;
  mutable std::mutex mu_;
  std::map<std::string, ReviewEntry> entries_;
  std::map<std::string, std::string> claims_;  // entry_id -> reviewer
};

}  // namespace assesskit::review

#endif  // ASSESSKIT_REVIEW_QUEUE_H_
