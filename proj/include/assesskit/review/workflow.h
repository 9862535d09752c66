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

#ifndef ASSESSKIT_REVIEW_WORKFLOW_H_
#define ASSESSKIT_REVIEW_WORKFLOW_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace assesskit::review {

enum class SubjectKind { kItemDraft, kDifFlag, kDrfFlag, kPlagiarismFlag, kMonitorAlert };
enum class ReviewState { kPendingFab, kPendingIqr, kApproved, kRejected, kRevise };
enum class Verdict { kApprove, kReject, kRevise };
enum class Stage { kFab, kIqr };

std::string_view SubjectKindName(SubjectKind kind);
std::string_view ReviewStateName(ReviewState state);
std::string_view VerdictName(Verdict verdict);
std::string_view StageName(Stage stage);
absl::StatusOr<SubjectKind> ParseSubjectKind(std::string_view name);
absl::StatusOr<ReviewState> ParseReviewState(std::string_view name);
absl::StatusOr<Verdict> ParseVerdict(std::string_view name);
absl::StatusOr<Stage> ParseStage(std::string_view name);

// Default reason taxonomy.
const std::vector<std::string>& DefaultReasonCodes();

bool IsTerminal(ReviewState state);
// Pending state served by a stage, or nullopt for terminal states.
std::optional<Stage> StageOf(ReviewState state);

// Item drafts pass FAB then IQR; every other subject is a single-stage flag
// whose approve means "confirm" and reject means "dismiss".
bool IsTwoStage(SubjectKind kind);

struct Subject {
  SubjectKind kind = SubjectKind::kItemDraft;
  std::string ref_id;         // item, flag or alert id
  std::string author_id;      // who produced it; may not review it
  std::string template_id;    // prompt template of an item draft
  std::string item_kind;      // item kind of an item draft
  std::string classification; // plagiarism flags: "suspect" or "benign"
  std::string session_id;     // plagiarism flags: the flagged session
  nlohmann::json attachments = nlohmann::json::object();

  bool operator==(const Subject&) const = default;
};

struct ReviewDecision {
  std::string reviewer_id;
  Verdict verdict = Verdict::kApprove;
  std::vector<std::string> reason_codes;
  std::string note;
  int64_t timestamp_ms = 0;
  // Recorded so replay needs no context.
  ReviewState from = ReviewState::kPendingFab;
  ReviewState to = ReviewState::kPendingFab;

  bool operator==(const ReviewDecision&) const = default;
};

struct ReviewEntry {
  std::string entry_id;
  Subject subject;
  ReviewState state = ReviewState::kPendingFab;
  std::vector<ReviewDecision> history;
  int64_t created_ms = 0;
  int version = 1;  // bumped on every decision

  bool operator==(const ReviewEntry&) const = default;
};

// Target state of a verdict from `state` for this subject kind, or an error
// naming the current state.
absl::StatusOr<ReviewState> Transition(SubjectKind kind, ReviewState state,
                                       Verdict verdict);

struct DecisionRules {
  std::vector<std::string> reason_codes = DefaultReasonCodes();
};

// Validates and applies one decision: pending state, no self review, IQR
// reviewer distinct from the FAB approver, reason codes on reject/revise.
// Fills decision.from/to and appends it to the history.
absl::Status ApplyDecision(ReviewEntry& entry, ReviewDecision decision,
                           const DecisionRules& rules = {});

// Re-walks the transition table from pending_fab.
absl::StatusOr<ReviewState> ReplayHistory(SubjectKind kind,
                                          const std::vector<ReviewDecision>& history);

// True when the history contains an FAB approval followed by an IQR
// approval by a different reviewer.
bool HasDistinctFabThenIqr(const ReviewEntry& entry);

nlohmann::json ToJson(const ReviewEntry& entry);
absl::StatusOr<ReviewEntry> EntryFromJson(const nlohmann::json& j);

}  // namespace assesskit::review

#endif  // ASSESSKIT_REVIEW_WORKFLOW_H_
