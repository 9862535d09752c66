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

#include <atomic>
#include <thread>

#include "assesskit/common/random.h"
#include "assesskit/review/ecp.h"
#include "assesskit/review/feedback.h"
#include "assesskit/review/queue.h"
#include "assesskit/review/workflow.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace assesskit::review {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

Subject ItemSubject(std::string ref = "item-1", std::string author = "generator") {
  Subject s;
  s.kind = SubjectKind::kItemDraft;
  s.ref_id = std::move(ref);
  s.author_id = std::move(author);
  s.template_id = "tpl-a";
  s.item_kind = "cloze";
  return s;
}

ReviewDecision Decision(std::string reviewer, Verdict verdict,
                        std::vector<std::string> codes = {}, int64_t t = 0) {
  ReviewDecision d;
  d.reviewer_id = std::move(reviewer);
  d.verdict = verdict;
  d.reason_codes = std::move(codes);
  d.timestamp_ms = t;
  return d;
}

TEST(WorkflowTest, ApproveAtFabMovesToIqr) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject(), 0).ok());
  auto e = q.Decide("e1", Decision("alice", Verdict::kApprove));
  ASSERT_TRUE(e.ok()) << e.status();
  EXPECT_EQ(e->state, ReviewState::kPendingIqr);
}

TEST(WorkflowTest, RejectWithoutReasonIsError) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject(), 0).ok());
  auto e = q.Decide("e1", Decision("alice", Verdict::kReject));
  ASSERT_FALSE(e.ok());
  EXPECT_EQ(e.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(q.Get("e1")->state, ReviewState::kPendingFab);
  EXPECT_TRUE(q.Get("e1")->history.empty());
  EXPECT_FALSE(q.Decide("e1", Decision("alice", Verdict::kRevise)).ok());
  EXPECT_FALSE(q.Decide("e1", Decision("alice", Verdict::kReject, {"not-a-code"})).ok());
}

TEST(WorkflowTest, ScriptedSixDecisionTrace) {
  // Hand walk of the transition table:
  //  1 generator approves own draft   -> denied, pending_fab
  //  2 alice rejects with no reason   -> invalid, pending_fab
  //  3 alice approves                 -> pending_iqr
  //  4 alice approves again at IQR    -> denied (made the FAB call)
  //  5 bob revises, factual-error     -> revise
  //  6 carol approves                 -> illegal, revise is terminal
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject(), 0).ok());
  EXPECT_EQ(q.Decide("e1", Decision("generator", Verdict::kApprove, {}, 1)).status().code(),
            absl::StatusCode::kPermissionDenied);
  EXPECT_EQ(q.Decide("e1", Decision("alice", Verdict::kReject, {}, 2)).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_TRUE(q.Decide("e1", Decision("alice", Verdict::kApprove, {}, 3)).ok());
  EXPECT_EQ(q.Decide("e1", Decision("alice", Verdict::kApprove, {}, 4)).status().code(),
            absl::StatusCode::kPermissionDenied);
  EXPECT_TRUE(q.Decide("e1", Decision("bob", Verdict::kRevise, {"factual-error"}, 5)).ok());
  auto last = q.Decide("e1", Decision("carol", Verdict::kApprove, {}, 6));
  EXPECT_EQ(last.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(last.status().message(), HasSubstr("revise"));

  const ReviewEntry e = *q.Get("e1");
  EXPECT_EQ(e.state, ReviewState::kRevise);
  ASSERT_EQ(e.history.size(), 2u);
  EXPECT_EQ(e.history[0].reviewer_id, "alice");
  EXPECT_EQ(e.history[0].from, ReviewState::kPendingFab);
  EXPECT_EQ(e.history[0].to, ReviewState::kPendingIqr);
  EXPECT_EQ(e.history[0].timestamp_ms, 3);
  EXPECT_EQ(e.history[1].reviewer_id, "bob");
  EXPECT_EQ(e.history[1].to, ReviewState::kRevise);
  EXPECT_THAT(e.history[1].reason_codes, ElementsAre("factual-error"));
  EXPECT_EQ(e.version, 3);
  EXPECT_EQ(*ReplayHistory(e.subject.kind, e.history), ReviewState::kRevise);
}

TEST(WorkflowTest, FullApprovalNeedsDistinctReviewers) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject(), 0).ok());
  ASSERT_TRUE(q.Decide("e1", Decision("alice", Verdict::kApprove)).ok());
  auto e = q.Decide("e1", Decision("bob", Verdict::kApprove));
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(e->state, ReviewState::kApproved);
  EXPECT_TRUE(HasDistinctFabThenIqr(*e));
}

TEST(WorkflowTest, FlagsAreSingleStage) {
  EXPECT_EQ(*Transition(SubjectKind::kDifFlag, ReviewState::kPendingFab, Verdict::kApprove),
            ReviewState::kApproved);
  EXPECT_EQ(*Transition(SubjectKind::kDrfFlag, ReviewState::kPendingFab, Verdict::kReject),
            ReviewState::kRejected);
  EXPECT_FALSE(Transition(SubjectKind::kDifFlag, ReviewState::kPendingFab, Verdict::kRevise).ok());
  EXPECT_FALSE(Transition(SubjectKind::kItemDraft, ReviewState::kApproved, Verdict::kReject).ok());
}

TEST(WorkflowTest, JsonRoundTrip) {
  ReviewQueue q;
  Subject s = ItemSubject();
  s.attachments = {{"filter", {{"stem_tokens", 12}}}};
  ASSERT_TRUE(q.Enqueue("e1", s, 17).ok());
  ASSERT_TRUE(q.Decide("e1", Decision("alice", Verdict::kApprove, {}, 20)).ok());
  ASSERT_TRUE(q.Decide("e1", Decision("bob", Verdict::kReject,
                                      {"hallucination", "factual-error"}, 30)).ok());
  const ReviewEntry e = *q.Get("e1");
  auto back = EntryFromJson(ToJson(e));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, e);
  ReviewQueue restored;
  EXPECT_TRUE(restored.Restore(*back).ok());
  ReviewEntry tampered = e;
  tampered.state = ReviewState::kApproved;
  EXPECT_FALSE(restored.Restore(tampered).ok());
}

TEST(QueueTest, NextForNeverHandsOutTheSameEntryTwice) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject("i1"), 0).ok());
  ASSERT_TRUE(q.Enqueue("e2", ItemSubject("i2"), 0).ok());
  auto a = q.NextFor("alice", Stage::kFab);
  auto b = q.NextFor("bob", Stage::kFab);
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  EXPECT_NE(a->entry_id, b->entry_id);
  EXPECT_EQ(q.NextFor("carol", Stage::kFab).status().code(), absl::StatusCode::kNotFound);
  // Same reviewer asking again gets their claim back.
  EXPECT_EQ(q.NextFor("alice", Stage::kFab)->entry_id, a->entry_id);
  // Claimed entries cannot be decided by someone else.
  EXPECT_EQ(q.Decide(a->entry_id, Decision("carol", Verdict::kApprove)).status().code(),
            absl::StatusCode::kAborted);
  ASSERT_TRUE(q.Decide(a->entry_id, Decision("alice", Verdict::kApprove)).ok());
  // The FAB approver is not offered the IQR stage.
  EXPECT_EQ(q.NextFor("alice", Stage::kIqr).status().code(), absl::StatusCode::kNotFound);
  EXPECT_EQ(q.NextFor("carol", Stage::kIqr)->entry_id, a->entry_id);
  ASSERT_TRUE(q.Release(b->entry_id, "bob").ok());
  EXPECT_EQ(q.NextFor("carol", Stage::kFab)->entry_id, b->entry_id);
}

TEST(QueueTest, AuthorIsNeverOffered) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject("i1", "alice"), 0).ok());
  EXPECT_FALSE(q.NextFor("alice", Stage::kFab).ok());
}

TEST(QueueTest, StaleVersionIsAborted) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject(), 0).ok());
  ASSERT_TRUE(q.Decide("e1", Decision("alice", Verdict::kApprove), 1).ok());
  EXPECT_EQ(q.Decide("e1", Decision("bob", Verdict::kApprove), 1).status().code(),
            absl::StatusCode::kAborted);
  EXPECT_TRUE(q.Decide("e1", Decision("bob", Verdict::kApprove), 2).ok());
}

TEST(QueueTest, ConcurrentDecisionsApplyOnce) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject(), 0).ok());
  std::atomic<int> applied{0}, aborted{0}, other{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 100; ++i) {
    threads.emplace_back([&, i] {
      auto r = q.Decide("e1", Decision("r" + std::to_string(i), Verdict::kApprove), 1);
      if (r.ok()) {
        ++applied;
      } else if (r.status().code() == absl::StatusCode::kAborted) {
        ++aborted;
      } else {
        ++other;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(applied.load(), 1);
  EXPECT_EQ(aborted.load(), 99);
  EXPECT_EQ(other.load(), 0);
  EXPECT_EQ(q.Get("e1")->history.size(), 1u);
}

Subject Plagiarism(std::string flag, std::string classification, std::string session) {
  Subject s;
  s.kind = SubjectKind::kPlagiarismFlag;
  s.ref_id = std::move(flag);
  s.classification = std::move(classification);
  s.session_id = std::move(session);
  return s;
}

TEST(AdjudicationTest, ConfirmMarksSessionDismissDoesNot) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("p1", Plagiarism("f1", "suspect", "s1"), 0).ok());
  ASSERT_TRUE(q.Enqueue("p2", Plagiarism("f2", "suspect", "s2"), 0).ok());
  auto confirmed = q.Adjudicate("p1", "proctor", true, {}, "verbatim source", 5);
  ASSERT_TRUE(confirmed.ok()) << confirmed.status();
  EXPECT_EQ(confirmed->state, ReviewState::kApproved);
  auto dismissed = q.Adjudicate("p2", "proctor", false, {"other"}, "common phrase", 6);
  ASSERT_TRUE(dismissed.ok());
  EXPECT_EQ(dismissed->state, ReviewState::kRejected);
  EXPECT_THAT(q.MarkedSessions(), ElementsAre("s1"));
}

TEST(AdjudicationTest, BenignFlagsAreNeverQueued) {
  ReviewQueue q;
  int queued = 0;
  for (int i = 0; i < 5; ++i) {
    queued += q.Enqueue("s" + std::to_string(i),
                        Plagiarism("fs" + std::to_string(i), "suspect", "x"), 0).ok();
  }
  for (int i = 0; i < 3; ++i) {
    auto r = q.Enqueue("b" + std::to_string(i),
                       Plagiarism("fb" + std::to_string(i), "benign", "x"), 0);
    EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
    queued += r.ok();
  }
  EXPECT_EQ(queued, 5);
  EXPECT_EQ(q.List().size(), 5u);
  // Restored benign flag (e.g. from an older store) still cannot be decided.
  ReviewEntry benign;
  benign.entry_id = "b9";
  benign.subject = Plagiarism("fb9", "benign", "x");
  ASSERT_TRUE(q.Restore(benign).ok());
  EXPECT_EQ(q.Adjudicate("b9", "proctor", true, {}, "", 0).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(FeedbackTest, NoRejections) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject(), 0).ok());
  ASSERT_TRUE(q.Decide("e1", Decision("alice", Verdict::kApprove, {}, 10)).ok());
  FeedbackReport r = BuildFeedbackReport(q.List(), {}, {0, 100}, 0.3);
  EXPECT_EQ(r.total_decisions, 1);
  EXPECT_EQ(r.total_rejections, 0);
  EXPECT_TRUE(r.reason_totals.empty());
  EXPECT_TRUE(r.attention.empty());
  FeedbackReport empty = BuildFeedbackReport({}, {}, {0, 100}, 0.3);
  EXPECT_EQ(empty.total_decisions, 0);
}

TEST(FeedbackTest, TwoCodesOneRejection) {
  ReviewQueue q;
  ASSERT_TRUE(q.Enqueue("e1", ItemSubject(), 0).ok());
  ASSERT_TRUE(q.Decide("e1", Decision("alice", Verdict::kReject,
                                      {"hallucination", "factual-error"}, 10)).ok());
  FeedbackReport r = BuildFeedbackReport(q.List(), {}, {0, 100}, 0.3);
  EXPECT_EQ(r.total_rejections, 1);
  EXPECT_EQ(r.per_template.at("tpl-a").rates.rejections, 1);
  EXPECT_EQ(r.reason_totals.at("hallucination"), 1);
  EXPECT_EQ(r.reason_totals.at("factual-error"), 1);
  EXPECT_THAT(r.attention, ElementsAre("tpl-a"));
}

TEST(FeedbackTest, FiftyDecisionWindowMatchesTally) {
  Rng rng(50);
  ReviewQueue q;
  const std::vector<std::string> templates = {"t1", "t2", "t3"};
  const std::vector<std::string> kinds = {"cloze", "main_idea"};
  const auto& codes = DefaultReasonCodes();
  // Oracle tallies kept alongside the script.
  std::map<std::string, int> decisions, rejections;
  std::map<std::string, int> code_tally;
  int total = 0, total_rej = 0;
  int entry = 0;
  while (total < 50) {
    Subject s = ItemSubject("i" + std::to_string(entry));
    s.template_id = templates[rng.UniformInt(3)];
    s.item_kind = kinds[rng.UniformInt(2)];
    const std::string id = "e" + std::to_string(entry++);
    ASSERT_TRUE(q.Enqueue(id, s, 0).ok());
    int stage = 0;
    while (total < 50 && stage < 2) {
      const int64_t t = 100 + static_cast<int64_t>(rng.UniformInt(900));
      const uint64_t roll = rng.UniformInt(3);
      std::vector<std::string> chosen;
      if (roll > 0) {
        chosen.push_back(codes[rng.UniformInt(codes.size())]);
        if (rng.Bernoulli(0.5)) chosen.push_back(codes[rng.UniformInt(codes.size())]);
      }
      const Verdict v = roll == 0 ? Verdict::kApprove
                                  : (roll == 1 ? Verdict::kReject : Verdict::kRevise);
      ASSERT_TRUE(q.Decide(id, Decision(stage == 0 ? "fab" : "iqr", v, chosen, t)).ok());
      ++total;
      ++decisions[s.template_id];
      if (v == Verdict::kReject) {
        ++total_rej;
        ++rejections[s.template_id];
        std::sort(chosen.begin(), chosen.end());
        chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
        for (const auto& c : chosen) ++code_tally[c];
      }
      if (v != Verdict::kApprove) break;
      ++stage;
    }
  }
  // A decision outside the window is ignored.
  ASSERT_TRUE(q.Enqueue("late", ItemSubject("late"), 0).ok());
  ASSERT_TRUE(q.Decide("late", Decision("fab", Verdict::kReject, {"other"}, 5000)).ok());

  FeedbackReport r = BuildFeedbackReport(q.List(), {{"n1", 150, "", "too hard"},
                                                    {"n2", 9000, "", "late"}},
                                         {100, 1000}, 0.5);
  EXPECT_EQ(r.total_decisions, 50);
  EXPECT_EQ(r.total_rejections, total_rej);
  int per_template_sum = 0;
  for (const auto& t : templates) {
    if (!decisions.contains(t)) continue;
    EXPECT_EQ(r.per_template.at(t).rates.decisions, decisions[t]);
    EXPECT_EQ(r.per_template.at(t).rates.rejections, rejections[t]);
    per_template_sum += r.per_template.at(t).rates.rejections;
    const bool attention = static_cast<double>(rejections[t]) / decisions[t] > 0.5;
    EXPECT_EQ(std::count(r.attention.begin(), r.attention.end(), t), attention ? 1 : 0);
  }
  EXPECT_EQ(per_template_sum, r.total_rejections);
  EXPECT_EQ(r.reason_totals, code_tally);
  ASSERT_EQ(r.surveys.size(), 1u);
  EXPECT_EQ(r.surveys[0].text, "too hard");
}

TEST(EcpTest, LaunchRequiresAllRoles) {
  auto ecp = RecordEcp("ecp-1", "Raise tree count", {"agreement-7"},
                       {"psychometrics", "ai-ethics"}, "scorer-v2", 1);
  ASSERT_TRUE(ecp.ok());
  ASSERT_TRUE(ApproveEcp(*ecp, "pat", "psychometrics", 2).ok());
  auto launch = LaunchEcp(*ecp, {}, 3);
  ASSERT_FALSE(launch.ok());
  EXPECT_THAT(launch.message(), HasSubstr("ai-ethics"));
  EXPECT_EQ(ecp->status, EcpStatus::kDraft);

  // Duplicate approval for the same role is a no-op.
  ASSERT_TRUE(ApproveEcp(*ecp, "quinn", "psychometrics", 4).ok());
  EXPECT_EQ(ecp->approvals.size(), 1u);
  EXPECT_THAT(MissingRoles(*ecp), ElementsAre("ai-ethics"));
  EXPECT_FALSE(LaunchEcp(*ecp, {}, 5).ok());

  EXPECT_EQ(ApproveEcp(*ecp, "pat", "ai-ethics", 6).code(),
            absl::StatusCode::kPermissionDenied);
  ASSERT_TRUE(ApproveEcp(*ecp, "rio", "ai-ethics", 7).ok());
  EXPECT_EQ(ecp->status, EcpStatus::kApproved);
  ASSERT_TRUE(LaunchEcp(*ecp, {}, 8).ok());
  EXPECT_EQ(ecp->status, EcpStatus::kLaunched);
  EXPECT_FALSE(LaunchEcp(*ecp, {}, 9).ok());
  EXPECT_FALSE(ApproveEcp(*ecp, "sam", "ai-ethics", 9).ok());

  auto again = EcpFromJson(ToJson(*ecp));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(*again, *ecp);
}

TEST(EcpTest, ModelVersionLaunchedOnce) {
  auto first = *RecordEcp("ecp-1", "v2", {}, {"lead"}, "scorer-v2", 0);
  auto second = *RecordEcp("ecp-2", "v2 again", {}, {"lead"}, "scorer-v2", 0);
  ASSERT_TRUE(ApproveEcp(first, "a", "lead", 1).ok());
  ASSERT_TRUE(ApproveEcp(second, "a", "lead", 1).ok());
  ASSERT_TRUE(LaunchEcp(first, {second}, 2).ok());
  EXPECT_FALSE(LaunchEcp(second, {first}, 3).ok());
  EXPECT_FALSE(RecordEcp("ecp-3", "x", {}, {}, "", 0).ok());
}

}  // namespace
}  // namespace assesskit::review
