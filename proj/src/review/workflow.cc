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

#include "assesskit/review/workflow.h"

#include <algorithm>
#include <array>
#include <utility>

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"

namespace assesskit::review {
namespace {

using nlohmann::json;

template <typename Enum, size_t N>
absl::StatusOr<Enum> ParseName(
    std::string_view name, const std::array<std::pair<Enum, std::string_view>, N>& table,
    std::string_view what) {
  for (const auto& [value, text] : table) {
    if (text == name) return value;
  }
  return absl::InvalidArgumentError(StrCat("unknown ", what, " '", name, "'"));
}

template <typename Enum, size_t N>
std::string_view NameOf(Enum value,
                        const std::array<std::pair<Enum, std::string_view>, N>& table) {
  for (const auto& [v, text] : table) {
    if (v == value) return text;
  }
  return "unknown";
}

constexpr std::array<std::pair<SubjectKind, std::string_view>, 5> kSubjectKinds = {{
    {SubjectKind::kItemDraft, "item_draft"},
    {SubjectKind::kDifFlag, "dif_flag"},
    {SubjectKind::kDrfFlag, "drf_flag"},
    {SubjectKind::kPlagiarismFlag, "plagiarism_flag"},
    {SubjectKind::kMonitorAlert, "monitor_alert"},
}};
constexpr std::array<std::pair<ReviewState, std::string_view>, 5> kStates = {{
    {ReviewState::kPendingFab, "pending_fab"},
    {ReviewState::kPendingIqr, "pending_iqr"},
    {ReviewState::kApproved, "approved"},
    {ReviewState::kRejected, "rejected"},
    {ReviewState::kRevise, "revise"},
}};
constexpr std::array<std::pair<Verdict, std::string_view>, 3> kVerdicts = {{
    {Verdict::kApprove, "approve"},
    {Verdict::kReject, "reject"},
    {Verdict::kRevise, "revise"},
}};
constexpr std::array<std::pair<Stage, std::string_view>, 2> kStages = {{
    {Stage::kFab, "fab"},
    {Stage::kIqr, "iqr"},
}};

}  // namespace

std::string_view SubjectKindName(SubjectKind kind) { return NameOf(kind, kSubjectKinds); }
std::string_view ReviewStateName(ReviewState state) { return NameOf(state, kStates); }
std::string_view VerdictName(Verdict verdict) { return NameOf(verdict, kVerdicts); }
std::string_view StageName(Stage stage) { return NameOf(stage, kStages); }

absl::StatusOr<SubjectKind> ParseSubjectKind(std::string_view name) {
  return ParseName(name, kSubjectKinds, "subject kind");
}
absl::StatusOr<ReviewState> ParseReviewState(std::string_view name) {
  return ParseName(name, kStates, "review state");
}
absl::StatusOr<Verdict> ParseVerdict(std::string_view name) {
  return ParseName(name, kVerdicts, "verdict");
}
absl::StatusOr<Stage> ParseStage(std::string_view name) {
  return ParseName(name, kStages, "stage");
}

const std::vector<std::string>& DefaultReasonCodes() {
  static const auto* codes = new std::vector<std::string>{
      "sensitive-content",        "factual-error",          "hallucination",
      "construct-misalignment",   "low-quality-distractor", "accessibility-barrier",
      "other"};
  return *codes;
}

bool IsTerminal(ReviewState state) {
  return state != ReviewState::kPendingFab && state != ReviewState::kPendingIqr;
}

std::optional<Stage> StageOf(ReviewState state) {
  if (state == ReviewState::kPendingFab) return Stage::kFab;
  if (state == ReviewState::kPendingIqr) return Stage::kIqr;
  return std::nullopt;
}

bool IsTwoStage(SubjectKind kind) { return kind == SubjectKind::kItemDraft; }

absl::StatusOr<ReviewState> Transition(SubjectKind kind, ReviewState state,
                                       Verdict verdict) {
  auto illegal = [&] {
    return absl::FailedPreconditionError(
        StrCat("cannot ", VerdictName(verdict), " a ", SubjectKindName(kind),
               " in state ", ReviewStateName(state)));
  };
  if (IsTerminal(state)) return illegal();
  if (!IsTwoStage(kind)) {
    if (state != ReviewState::kPendingFab) return illegal();
    switch (verdict) {
      case Verdict::kApprove:
        return ReviewState::kApproved;
      case Verdict::kReject:
        return ReviewState::kRejected;
      case Verdict::kRevise:
        return illegal();
    }
  }
  switch (verdict) {
    case Verdict::kApprove:
      return state == ReviewState::kPendingFab ? ReviewState::kPendingIqr
                                               : ReviewState::kApproved;
    case Verdict::kReject:
      return ReviewState::kRejected;
    case Verdict::kRevise:
      return ReviewState::kRevise;
  }
  return illegal();
}

absl::Status ApplyDecision(ReviewEntry& entry, ReviewDecision decision,
                           const DecisionRules& rules) {
  if (decision.reviewer_id.empty()) {
    return absl::InvalidArgumentError("reviewer_id is required");
  }
  ASSIGN_OR_RETURN(ReviewState next,
                   Transition(entry.subject.kind, entry.state, decision.verdict));
  if (decision.reviewer_id == entry.subject.author_id) {
    return absl::PermissionDeniedError(
        StrCat("reviewer '", decision.reviewer_id, "' authored this entry"));
  }
  if (entry.state == ReviewState::kPendingIqr) {
    for (const auto& past : entry.history) {
      if (past.from == ReviewState::kPendingFab &&
          past.reviewer_id == decision.reviewer_id) {
        return absl::PermissionDeniedError(StrCat(
            "reviewer '", decision.reviewer_id, "' already made the FAB decision"));
      }
    }
  }
  if (decision.verdict != Verdict::kApprove && decision.reason_codes.empty()) {
    return absl::InvalidArgumentError(
        StrCat(VerdictName(decision.verdict), " requires at least one reason code"));
  }
  for (const auto& code : decision.reason_codes) {
    if (std::find(rules.reason_codes.begin(), rules.reason_codes.end(), code) ==
        rules.reason_codes.end()) {
      return absl::InvalidArgumentError(StrCat("unknown reason code '", code, "'"));
    }
  }
  std::sort(decision.reason_codes.begin(), decision.reason_codes.end());
  decision.reason_codes.erase(
      std::unique(decision.reason_codes.begin(), decision.reason_codes.end()),
      decision.reason_codes.end());
  decision.from = entry.state;
  decision.to = next;
  entry.state = next;
  entry.history.push_back(std::move(decision));
  ++entry.version;
  return absl::OkStatus();
}

absl::StatusOr<ReviewState> ReplayHistory(
    SubjectKind kind, const std::vector<ReviewDecision>& history) {
  ReviewState state = ReviewState::kPendingFab;
  for (size_t i = 0; i < history.size(); ++i) {
    if (history[i].from != state) {
      return absl::DataLossError(StrCat("history step ", i, " starts from ",
                                        ReviewStateName(history[i].from),
                                        ", replay is at ", ReviewStateName(state)));
    }
    ASSIGN_OR_RETURN(state, Transition(kind, state, history[i].verdict));
    if (state != history[i].to) {
      return absl::DataLossError(StrCat("history step ", i, " disagrees with replay"));
    }
  }
  return state;
}

bool HasDistinctFabThenIqr(const ReviewEntry& entry) {
  std::optional<std::string> fab_approver;
  for (const auto& d : entry.history) {
    if (d.verdict != Verdict::kApprove) continue;
    if (d.from == ReviewState::kPendingFab) {
      fab_approver = d.reviewer_id;
    } else if (d.from == ReviewState::kPendingIqr && fab_approver.has_value() &&
               *fab_approver != d.reviewer_id) {
      return true;
    }
  }
  return false;
}

json ToJson(const ReviewEntry& entry) {
  json history = json::array();
  for (const auto& d : entry.history) {
    history.push_back({{"reviewer_id", d.reviewer_id},
                       {"verdict", VerdictName(d.verdict)},
                       {"reason_codes", d.reason_codes},
                       {"note", d.note},
                       {"timestamp_ms", d.timestamp_ms},
                       {"from", ReviewStateName(d.from)},
                       {"to", ReviewStateName(d.to)}});
  }
  const Subject& s = entry.subject;
  return {{"entry_id", entry.entry_id},
          {"subject",
           {{"kind", SubjectKindName(s.kind)},
            {"ref_id", s.ref_id},
            {"author_id", s.author_id},
            {"template_id", s.template_id},
            {"item_kind", s.item_kind},
            {"classification", s.classification},
            {"session_id", s.session_id},
            {"attachments", s.attachments}}},
          {"state", ReviewStateName(entry.state)},
          {"history", std::move(history)},
          {"created_ms", entry.created_ms},
          {"version", entry.version}};
}

absl::StatusOr<ReviewEntry> EntryFromJson(const json& j) {
  try {
    ReviewEntry e;
    e.entry_id = j.at("entry_id").get<std::string>();
    const json& s = j.at("subject");
    ASSIGN_OR_RETURN(e.subject.kind, ParseSubjectKind(s.at("kind").get<std::string>()));
    e.subject.ref_id = s.at("ref_id").get<std::string>();
    e.subject.author_id = s.value("author_id", "");
    e.subject.template_id = s.value("template_id", "");
    e.subject.item_kind = s.value("item_kind", "");
    e.subject.classification = s.value("classification", "");
    e.subject.session_id = s.value("session_id", "");
    e.subject.attachments = s.value("attachments", json::object());
    ASSIGN_OR_RETURN(e.state, ParseReviewState(j.at("state").get<std::string>()));
    for (const json& d : j.at("history")) {
      ReviewDecision decision;
      decision.reviewer_id = d.at("reviewer_id").get<std::string>();
      ASSIGN_OR_RETURN(decision.verdict, ParseVerdict(d.at("verdict").get<std::string>()));
      decision.reason_codes = d.at("reason_codes").get<std::vector<std::string>>();
      decision.note = d.value("note", "");
      decision.timestamp_ms = d.at("timestamp_ms").get<int64_t>();
      ASSIGN_OR_RETURN(decision.from, ParseReviewState(d.at("from").get<std::string>()));
      ASSIGN_OR_RETURN(decision.to, ParseReviewState(d.at("to").get<std::string>()));
      e.history.push_back(std::move(decision));
    }
    e.created_ms = j.at("created_ms").get<int64_t>();
    e.version = j.at("version").get<int>();
    return e;
  } catch (const json::exception& ex) {
    return absl::InvalidArgumentError(StrCat("malformed review entry: ", ex.what()));
  }
}

}  // namespace assesskit::review
