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

#ifndef ASSESSKIT_PLATFORM_ENGINE_H_
#define ASSESSKIT_PLATFORM_ENGINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "assesskit/common/random.h"
#include "assesskit/features/cefr.h"
#include "assesskit/features/extractors.h"
#include "assesskit/features/grammar.h"
#include "assesskit/itemgen/prompt.h"
#include "assesskit/itemgen/provider.h"
#include "assesskit/plagiarism/detector.h"
#include "assesskit/platform/config.h"
#include "assesskit/platform/store.h"
#include "assesskit/review/queue.h"
#include "assesskit/scoring/gbt.h"
#include "assesskit/text/embedding.h"
#include "assesskit/text/idf.h"
#include "assesskit/text/ngram.h"
#include "json.hpp"

namespace assesskit::platform {

// Status payload carrying {"field": "message"} for malformed requests.
inline constexpr char kFieldErrorsPayload[] = "assesskit/fields";

// Field-level errors of a request body, or nullopt.
std::optional<nlohmann::json> FieldErrors(const absl::Status& status);

// Trained and indexed artifacts loaded once per process; read-only after
// construction.
struct Resources {
  std::unique_ptr<text::IdfTable> idf;
  std::unique_ptr<text::EmbeddingSpace> space;
  features::CefrWordlist wordlist;
  std::unique_ptr<text::NGramModel> dwu_low;
  std::unique_ptr<text::NGramModel> dwu_high;
  features::MarkerDepthProvider depth;
  std::vector<features::GrammarRule> rules;
  std::shared_ptr<const plagiarism::DocumentIndex> index;
  itemgen::PromptTemplate prompt_template;
  std::vector<itemgen::Exemplar> exemplars;
  std::unique_ptr<itemgen::LlmProvider> provider;
  std::unique_ptr<text::NGramModel> language_model;

  features::FeatureResources Features() const;
};

absl::StatusOr<std::unique_ptr<Resources>> LoadResources(
    const Config& config, std::unique_ptr<itemgen::LlmProvider> provider = nullptr);

// Every operation of the service, shared by the CLI and the HTTP server.
// Requests and results are JSON. Each mutating operation writes at most one
// store record and runs under one engine lock; reads go straight to the
// thread-safe store and queue.
class Engine {
 public:
  // A null provider selects the one named in the config.
  static absl::StatusOr<std::unique_ptr<Engine>> Create(
      const Config& config, std::unique_ptr<itemgen::LlmProvider> provider = nullptr);

  const Config& config() const { return config_; }
  Store& store() { return *store_; }
  const Resources& resources() const { return *resources_; }

  nlohmann::json Health() const;

  // {prompt_text, text, response_id?, prompt_id?} -> {raw, band, explanation}
  absl::StatusOr<nlohmann::json> Score(const nlohmann::json& request);
  // {text, response_id?, session_id?} -> flag with highlights
  absl::StatusOr<nlohmann::json> Scan(const nlohmann::json& request);
  absl::StatusOr<nlohmann::json> GetFlag(const std::string& flag_id) const;

  // {state?, stage?, kind?}
  absl::StatusOr<nlohmann::json> ListQueue(const nlohmann::json& query) const;
  // {reviewer_id, stage} -> claimed entry
  absl::StatusOr<nlohmann::json> ClaimNext(const nlohmann::json& request);
  absl::StatusOr<nlohmann::json> Release(const std::string& entry_id,
                                         const nlohmann::json& request);
  absl::StatusOr<nlohmann::json> GetReview(const std::string& entry_id) const;
  // {reviewer_id, verdict, reason_codes?, note?, version}
  absl::StatusOr<nlohmann::json> Decide(const std::string& entry_id,
                                        const nlohmann::json& request);
  // {proctor_id, confirm, reason_codes?, note?, version}
  absl::StatusOr<nlohmann::json> Adjudicate(const std::string& entry_id,
                                            const nlohmann::json& request);
  // {from_ms, to_ms}
  absl::StatusOr<nlohmann::json> Feedback(const nlohmann::json& query) const;

  // {category, topic, seed, min_words?, max_words?}
  absl::StatusOr<nlohmann::json> GeneratePassage(const nlohmann::json& request);
  // {passage_id, seed, alternatives?}
  absl::StatusOr<nlohmann::json> GenerateItems(const nlohmann::json& request);

  absl::StatusOr<nlohmann::json> AuditDif(const nlohmann::json& request);
  absl::StatusOr<nlohmann::json> AuditDrf(const nlohmann::json& request);
  absl::StatusOr<nlohmann::json> AuditRepresentation(const nlohmann::json& request);

  // {week, sessions?}; sessions default to the configured file.
  absl::StatusOr<nlohmann::json> MonitorRun(const nlohmann::json& request);
  // {week, sessions?} or {mix}
  absl::StatusOr<nlohmann::json> SetBaseline(const nlohmann::json& request);
  absl::StatusOr<nlohmann::json> MonitorReport(int week) const;

  // {version, model}
  absl::StatusOr<nlohmann::json> RegisterModel(const nlohmann::json& request);
  // {description, evidence?, required_roles, model_version?}
  absl::StatusOr<nlohmann::json> CreateEcp(const nlohmann::json& request);
  absl::StatusOr<nlohmann::json> GetEcp(const std::string& ecp_id) const;
  // {approver_id, role}
  absl::StatusOr<nlohmann::json> ApproveEcp(const std::string& ecp_id,
                                            const nlohmann::json& request);
  absl::StatusOr<nlohmann::json> LaunchEcp(const std::string& ecp_id);

 private:
  Engine(Config config, std::unique_ptr<Store> store, std::unique_ptr<Resources> resources);

  // Clock and id source. Logical mode derives both from the store sequence,
  // so the same operations on the same store give the same bytes.
  void BeginOpLocked();
  int64_t NowLocked();
  std::string NewIdLocked();

  absl::Status RestoreQueue();
  absl::StatusOr<std::vector<EntityEnvelope>> CommitLocked(const std::vector<Mutation>& m,
                                                           int64_t now_ms);
  absl::StatusOr<std::shared_ptr<const scoring::TrainedScorer>> ActiveScorer(
      std::string* version);
  absl::StatusOr<nlohmann::json> StoreEntries(const std::vector<review::ReviewEntry>& entries,
                                              std::vector<Mutation>& mutations);
  absl::StatusOr<std::vector<monitor::SessionRecord>> Sessions(const nlohmann::json& request)
      const;

  Config config_;
  std::unique_ptr<Store> store_;
  std::unique_ptr<Resources> resources_;
  review::ReviewQueue queue_;

  std::mutex mu_;  // serializes mutating operations
  uint64_t op_sequence_ = 0;
  uint64_t op_counter_ = 0;
  Rng wall_rng_;
  uint64_t last_ms_ = 0;
  uint64_t last_lo_ = 0;
  uint16_t last_hi_ = 0;

  std::mutex scorer_mu_;
  std::map<std::string, std::shared_ptr<const scoring::TrainedScorer>> scorers_;
};

}  // namespace assesskit::platform

#endif  // ASSESSKIT_PLATFORM_ENGINE_H_
