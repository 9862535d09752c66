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

#include "assesskit/platform/engine.h"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <set>

#include "absl/strings/cord.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/fairness/drf.h"
#include "assesskit/fairness/representation.h"
#include "assesskit/fairness/route.h"
#include "assesskit/itemgen/builders.h"
#include "assesskit/itemgen/pipeline.h"
#include "assesskit/monitor/monitor.h"
#include "assesskit/platform/ids.h"
#include "assesskit/review/ecp.h"
#include "assesskit/review/feedback.h"
#include "assesskit/scoring/band.h"
#include "assesskit/scoring/model_io.h"
#include "assesskit/scoring/shap.h"
#include "assesskit/text/corpus.h"

namespace assesskit::platform {
namespace {

using nlohmann::json;

constexpr char kActiveModelId[] = "active-model";

// Typed access to a request body that collects every field error before
// failing.
class Request {
 public:
  explicit Request(const json& j) : j_(j) {
    if (!j_.is_object()) errors_["body"] = "expected a JSON object";
  }

  bool Has(const char* key) const {
    known_.insert(key);
    return j_.is_object() && j_.contains(key);
  }

  // Accepts a key that is read elsewhere.
  void Allow(const char* key) { known_.insert(key); }

  std::string Str(const char* key, bool required = true, std::string fallback = "") {
    if (!Has(key)) {
      if (required) Missing(key);
      return fallback;
    }
    if (!j_[key].is_string()) {
      errors_[key] = "expected a string";
      return fallback;
    }
    std::string v = j_[key].get<std::string>();
    if (required && v.empty()) errors_[key] = "must not be empty";
    return v;
  }

  int64_t Int(const char* key, bool required = true, int64_t fallback = 0) {
    if (!Has(key)) {
      if (required) Missing(key);
      return fallback;
    }
    if (!j_[key].is_number_integer()) {
      errors_[key] = "expected an integer";
      return fallback;
    }
    return j_[key].get<int64_t>();
  }

  double Num(const char* key, bool required = true, double fallback = 0.0) {
    if (!Has(key)) {
      if (required) Missing(key);
      return fallback;
    }
    if (!j_[key].is_number()) {
      errors_[key] = "expected a number";
      return fallback;
    }
    return j_[key].get<double>();
  }

  bool Bool(const char* key, bool required = true, bool fallback = false) {
    if (!Has(key)) {
      if (required) Missing(key);
      return fallback;
    }
    if (!j_[key].is_boolean()) {
      errors_[key] = "expected a boolean";
      return fallback;
    }
    return j_[key].get<bool>();
  }

  std::vector<std::string> Strs(const char* key, bool required = true) {
    std::vector<std::string> out;
    if (!Has(key)) {
      if (required) Missing(key);
      return out;
    }
    const json& v = j_[key];
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& e) {
          return e.is_string();
        })) {
      errors_[key] = "expected an array of strings";
      return out;
    }
    for (const auto& e : v) out.push_back(e.get<std::string>());
    return out;
  }

  const json* Array(const char* key, bool required = true) {
    if (!Has(key)) {
      if (required) Missing(key);
      return nullptr;
    }
    if (!j_[key].is_array()) {
      errors_[key] = "expected an array";
      return nullptr;
    }
    return &j_[key];
  }

  const json* Object(const char* key, bool required = true) {
    if (!Has(key)) {
      if (required) Missing(key);
      return nullptr;
    }
    if (!j_[key].is_object()) {
      errors_[key] = "expected an object";
      return nullptr;
    }
    return &j_[key];
  }

  void Error(const std::string& field, std::string message) {
    errors_.emplace(field, std::move(message));
  }

  absl::Status Done() {
    if (j_.is_object()) {
      for (const auto& [key, value] : j_.items()) {
        if (known_.count(key) == 0) errors_.emplace(key, "unknown field");
      }
    }
    if (errors_.empty()) return absl::OkStatus();
    std::vector<std::string> parts;
    json fields = json::object();
    for (const auto& [field, message] : errors_) {
      parts.push_back(StrCat(field, ": ", message));
      fields[field] = message;
    }
    absl::Status s = absl::InvalidArgumentError(StrCat("invalid request: ", Join(parts, "; ")));
    s.SetPayload(kFieldErrorsPayload, absl::Cord(fields.dump()));
    return s;
  }

 private:
  void Missing(const char* key) { errors_[key] = "is required"; }

  const json& j_;
  mutable std::set<std::string> known_;
  std::map<std::string, std::string> errors_;
};

absl::Status FieldError(const std::string& field, std::string message) {
  json j = json::object();
  Request r(j);
  r.Error(field, std::move(message));
  return r.Done();
}

// Wraps a module error as a field error on `field`.
absl::Status AsFieldError(const absl::Status& s, const std::string& field) {
  if (s.code() != absl::StatusCode::kInvalidArgument || FieldErrors(s).has_value()) return s;
  return FieldError(field, std::string(s.message()));
}

json BandJson(const scoring::Band& band) {
  return {{"score", band.score}, {"cefr", std::string(band.cefr)}};
}

json ExplanationJson(const scoring::ScoreExplanation& e) {
  json contributions = json::array();
  for (const auto& [name, value] : e.contributions) {
    contributions.push_back({{"feature", name}, {"value", value}});
  }
  json totals = json::object();
  for (auto s : features::kAllSubconstructs) {
    totals[std::string(features::SubconstructName(s))] = e.subconstruct_totals[static_cast<int>(s)];
  }
  return {{"base_value", e.base_value},
          {"prediction", e.prediction},
          {"contributions", contributions},
          {"subconstructs", totals}};
}

json RepresentationJson(const fairness::RepresentationReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"gender", c.cell.first},
                     {"l1", c.cell.second},
                     {"count", c.count},
                     {"proportion", c.proportion},
                     {"target", c.target},
                     {"deviation", c.deviation}});
  }
  json failing = json::array();
  for (const auto& c : r.failing_cells) failing.push_back({{"gender", c.first}, {"l1", c.second}});
  return {{"total", r.total},
          {"tolerance", r.tolerance},
          {"cells", cells},
          {"failing_cells", failing},
          {"pass", r.pass}};
}

// Runs a callback on scope exit unless dismissed.
class OnExit {
 public:
  explicit OnExit(std::function<void()> f) : f_(std::move(f)) {}
  ~OnExit() {
    if (f_) f_();
  }
  void Dismiss() { f_ = nullptr; }

 private:
  std::function<void()> f_;
};

json ReviewIds(const std::vector<review::ReviewEntry>& entries) {
  json ids = json::array();
  for (const auto& e : entries) ids.push_back(e.entry_id);
  return ids;
}

}  // namespace

std::optional<json> FieldErrors(const absl::Status& status) {
  auto payload = status.GetPayload(kFieldErrorsPayload);
  if (!payload.has_value()) return std::nullopt;
  json j = json::parse(std::string(*payload), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

features::FeatureResources Resources::Features() const {
  features::FeatureResources r;
  r.idf = idf.get();
  r.space = space.get();
  r.wordlist = &wordlist;
  r.dwu = {dwu_low.get(), dwu_high.get()};
  r.depth_provider = &depth;
  r.rules = rules;
  return r;
}

absl::StatusOr<std::unique_ptr<Resources>> LoadResources(
    const Config& config, std::unique_ptr<itemgen::LlmProvider> provider) {
  auto r = std::make_unique<Resources>();
  const ResourcesConfig& rc = config.resources;

  ASSIGN_OR_RETURN(auto reference, text::LoadCorpus(rc.reference_corpus));
  const std::vector<std::string> texts = text::DocumentTexts(reference);
  ASSIGN_OR_RETURN(text::IdfTable idf, text::IdfTable::Build(texts));
  r->idf = std::make_unique<text::IdfTable>(std::move(idf));
  ASSIGN_OR_RETURN(text::EmbeddingSpace space,
                   text::EmbeddingSpace::Train(texts, rc.lsa_dimensions, "reference"));
  r->space = std::make_unique<text::EmbeddingSpace>(std::move(space));

  ASSIGN_OR_RETURN(r->wordlist, features::CefrWordlist::LoadTsv(rc.cefr_wordlist));
  ASSIGN_OR_RETURN(auto low_docs, text::LoadCorpus(rc.dwu_low));
  ASSIGN_OR_RETURN(auto high_docs, text::LoadCorpus(rc.dwu_high));
  ASSIGN_OR_RETURN(text::NGramModel low,
                   text::NGramModel::TrainOnText(text::DocumentTexts(low_docs), rc.dwu_order));
  ASSIGN_OR_RETURN(text::NGramModel high,
                   text::NGramModel::TrainOnText(text::DocumentTexts(high_docs), rc.dwu_order));
  r->dwu_low = std::make_unique<text::NGramModel>(std::move(low));
  r->dwu_high = std::make_unique<text::NGramModel>(std::move(high));
  if (rc.grammar_rules.empty()) {
    r->rules = features::BundledGrammarRules();
  } else {
    ASSIGN_OR_RETURN(r->rules, features::LoadGrammarRules(rc.grammar_rules));
  }

  ASSIGN_OR_RETURN(auto sources, plagiarism::LoadSourceDocuments(config.plagiarism.sources));
  ASSIGN_OR_RETURN(r->index,
                   plagiarism::DocumentIndex::Build(std::move(sources), config.plagiarism.winnow));

  const GenerationConfig& gc = config.generation;
  ASSIGN_OR_RETURN(r->prompt_template, itemgen::LoadTemplate(gc.template_path));
  ASSIGN_OR_RETURN(r->exemplars, itemgen::LoadExemplars(gc.corpus));
  ASSIGN_OR_RETURN(auto mock_docs, itemgen::LoadMockCorpus(gc.corpus));
  std::vector<std::string> lm_texts;
  for (const auto& d : mock_docs) lm_texts.push_back(d.text);
  ASSIGN_OR_RETURN(text::NGramModel lm,
                   text::NGramModel::TrainOnText(lm_texts, gc.language_model_order));
  r->language_model = std::make_unique<text::NGramModel>(std::move(lm));
  if (provider != nullptr) {
    r->provider = std::move(provider);
  } else if (gc.provider == "http") {
    ASSIGN_OR_RETURN(r->provider, itemgen::HttpProvider::FromEnvironment());
  } else {
    ASSIGN_OR_RETURN(r->provider,
                     itemgen::MockProvider::Create(std::move(mock_docs), gc.language_model_order));
  }
  return r;
}

Engine::Engine(Config config, std::unique_ptr<Store> store, std::unique_ptr<Resources> resources)
    : config_(std::move(config)),
      store_(std::move(store)),
      resources_(std::move(resources)),
      queue_(review::DecisionRules{config_.review.reason_codes}),
      wall_rng_(std::random_device{}() ^ (uint64_t{std::random_device{}()} << 32)) {}

absl::StatusOr<std::unique_ptr<Engine>> Engine::Create(
    const Config& config, std::unique_ptr<itemgen::LlmProvider> provider) {
  ASSIGN_OR_RETURN(auto resources, LoadResources(config, std::move(provider)));
  ASSIGN_OR_RETURN(auto store, Store::Open(config.store.path, config.store.options));
  std::unique_ptr<Engine> engine(new Engine(config, std::move(store), std::move(resources)));
  RETURN_IF_ERROR(engine->RestoreQueue());
  return engine;
}

absl::Status Engine::RestoreQueue() {
  queue_.Clear();
  for (const EntityEnvelope& e : store_->List("review")) {
    ASSIGN_OR_RETURN(review::ReviewEntry entry, review::EntryFromJson(e.payload));
    RETURN_IF_ERROR(queue_.Restore(std::move(entry)));
  }
  return absl::OkStatus();
}

void Engine::BeginOpLocked() {
  op_sequence_ = store_->sequence();
  op_counter_ = 0;
}

int64_t Engine::NowLocked() {
  if (config_.store.logical_clock) {
    return config_.store.logical_epoch_ms + static_cast<int64_t>(op_sequence_) * 1000;
  }
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string Engine::NewIdLocked() {
  if (config_.store.logical_clock) {
    const uint64_t tick = op_sequence_ * 1000 + op_counter_++;
    const uint64_t r = Mix64(config_.store.id_seed ^ Mix64(tick + 1));
    return EncodeUlid(static_cast<uint64_t>(NowLocked()) + op_counter_ - 1,
                      static_cast<uint16_t>(Mix64(r) & 0xffff), r);
  }
  const uint64_t now = static_cast<uint64_t>(NowLocked());
  if (now <= last_ms_) {
    // Same or earlier millisecond: keep the time and count up.
    if (++last_lo_ == 0) ++last_hi_;
  } else {
    last_ms_ = now;
    last_lo_ = wall_rng_.Next();
    last_hi_ = static_cast<uint16_t>(wall_rng_.Next() & 0x7fff);
  }
  return EncodeUlid(last_ms_, last_hi_, last_lo_);
}

absl::StatusOr<std::vector<EntityEnvelope>> Engine::CommitLocked(
    const std::vector<Mutation>& mutations, int64_t now_ms) {
  auto out = store_->Commit(mutations, now_ms);
  if (!out.ok()) {
    // The queue may hold entries the store refused; rebuild it.
    if (absl::Status s = RestoreQueue(); !s.ok()) return s;
  }
  return out;
}

absl::StatusOr<json> Engine::StoreEntries(const std::vector<review::ReviewEntry>& entries,
                                          std::vector<Mutation>& mutations) {
  for (const auto& e : entries) {
    mutations.push_back(Mutation::Put(e.entry_id, "review", review::ToJson(e)));
  }
  return ReviewIds(entries);
}

json Engine::Health() const {
  return {{"status", "ok"}};
}

// Scoring ------------------------------------------------------------------

absl::StatusOr<std::shared_ptr<const scoring::TrainedScorer>> Engine::ActiveScorer(
    std::string* version) {
  std::string model_json;
  auto active = store_->Get(kActiveModelId);
  if (active.ok()) {
    *version = active->payload.at("version").get<std::string>();
    const std::string model_id = active->payload.at("model_id").get<std::string>();
    std::lock_guard<std::mutex> lock(scorer_mu_);
    if (auto it = scorers_.find(model_id); it != scorers_.end()) return it->second;
    ASSIGN_OR_RETURN(EntityEnvelope model, store_->Get(model_id));
    ASSIGN_OR_RETURN(scoring::TrainedScorer scorer,
                     scoring::ParseScorer(model.payload.at("model").dump()));
    auto ptr = std::make_shared<const scoring::TrainedScorer>(std::move(scorer));
    scorers_[model_id] = ptr;
    return ptr;
  }
  *version = config_.scoring.model_version;
  std::lock_guard<std::mutex> lock(scorer_mu_);
  if (auto it = scorers_.find(""); it != scorers_.end()) return it->second;
  auto loaded = scoring::LoadScorer(config_.scoring.model_path);
  if (!loaded.ok()) {
    return absl::FailedPreconditionError(
        StrCat("no scoring model available: ", loaded.status().message()));
  }
  auto ptr = std::make_shared<const scoring::TrainedScorer>(*std::move(loaded));
  scorers_[""] = ptr;
  return ptr;
}

absl::StatusOr<json> Engine::Score(const json& request) {
  Request r(request);
  const std::string prompt_text = r.Str("prompt_text", false);
  const std::string text = r.Str("text", false);
  if (!r.Has("text")) r.Error("text", "is required");
  std::string response_id = r.Str("response_id", false);
  const std::string prompt_id = r.Str("prompt_id", false);
  RETURN_IF_ERROR(r.Done());

  std::string version;
  ASSIGN_OR_RETURN(auto scorer, ActiveScorer(&version));
  ASSIGN_OR_RETURN(features::FeatureVector fv,
                   features::ExtractAll(prompt_text, text, resources_->Features()));
  ASSIGN_OR_RETURN(scoring::ScoreExplanation explanation, scoring::Explain(*scorer, fv));
  const double raw = explanation.prediction;
  ASSIGN_OR_RETURN(scoring::Band band, scoring::ToBand(raw));
  json feature_values = json::object();
  for (const auto& f : fv.features()) feature_values[f.name] = f.value;

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  const std::string score_id = NewIdLocked();
  if (response_id.empty()) response_id = score_id;
  json result = {{"score_id", score_id},
                 {"response_id", response_id},
                 {"prompt_id", prompt_id},
                 {"model_version", version},
                 {"raw", raw},
                 {"band", BandJson(band)},
                 {"features", feature_values},
                 {"explanation", ExplanationJson(explanation)}};
  RETURN_IF_ERROR(CommitLocked({Mutation::Put(score_id, "score", result)}, now).status());
  return result;
}

// Plagiarism ---------------------------------------------------------------

absl::StatusOr<json> Engine::Scan(const json& request) {
  Request r(request);
  const std::string text = r.Str("text", false);
  if (!r.Has("text")) r.Error("text", "is required");
  std::string response_id = r.Str("response_id", false);
  const std::string session_id = r.Str("session_id", false);
  RETURN_IF_ERROR(r.Done());

  const plagiarism::DocumentIndex& index = *resources_->index;
  ASSIGN_OR_RETURN(auto spans, plagiarism::Scan(index, text, index.params()));

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  // Entries enqueued below must not outlive a failed commit.
  OnExit restore([this] { RestoreQueue().IgnoreError(); });
  const std::string flag_id = NewIdLocked();
  if (response_id.empty()) response_id = flag_id;
  plagiarism::PlagiarismFlag flag =
      plagiarism::Classify(response_id, text, std::move(spans), config_.plagiarism.threshold);
  json payload = plagiarism::ToJson(flag);
  payload["flag_id"] = flag_id;
  payload["session_id"] = session_id;
  payload["highlights"] = plagiarism::ToJson(plagiarism::RenderHighlights(flag, index));

  std::vector<Mutation> mutations;
  std::vector<review::ReviewEntry> entries;
  if (flag.classification == plagiarism::Classification::kSuspect) {
    review::Subject subject;
    subject.kind = review::SubjectKind::kPlagiarismFlag;
    subject.ref_id = flag_id;
    subject.author_id = "plagiarism-detector";
    subject.classification = "suspect";
    subject.session_id = session_id;
    subject.attachments = {{"response_id", response_id}, {"coverage", flag.coverage}};
    ASSIGN_OR_RETURN(review::ReviewEntry entry,
                     queue_.Enqueue(NewIdLocked(), std::move(subject), now));
    payload["review_id"] = entry.entry_id;
    entries.push_back(std::move(entry));
  }
  mutations.push_back(Mutation::Put(flag_id, "flag", payload));
  ASSIGN_OR_RETURN(json ids, StoreEntries(entries, mutations));
  RETURN_IF_ERROR(CommitLocked(mutations, now).status());
  restore.Dismiss();
  return payload;
}

absl::StatusOr<json> Engine::GetFlag(const std::string& flag_id) const {
  ASSIGN_OR_RETURN(EntityEnvelope e, store_->Get(flag_id));
  if (e.kind != "flag") return absl::NotFoundError(StrCat("no flag '", flag_id, "'"));
  return e.payload;
}

// Review -------------------------------------------------------------------

absl::StatusOr<json> Engine::ListQueue(const json& query) const {
  Request r(query);
  const std::string state = r.Str("state", false);
  const std::string stage = r.Str("stage", false);
  const std::string kind = r.Str("kind", false);
  RETURN_IF_ERROR(r.Done());
  std::optional<review::ReviewState> state_filter;
  if (!state.empty()) {
    auto s = review::ParseReviewState(state);
    if (!s.ok()) return FieldError("state", std::string(s.status().message()));
    state_filter = *s;
  }
  std::optional<review::Stage> stage_filter;
  if (!stage.empty()) {
    auto s = review::ParseStage(stage);
    if (!s.ok()) return FieldError("stage", std::string(s.status().message()));
    stage_filter = *s;
  }
  json entries = json::array();
  for (const auto& e : queue_.List(state_filter)) {
    if (stage_filter.has_value() && review::StageOf(e.state) != stage_filter) continue;
    if (!kind.empty() && review::SubjectKindName(e.subject.kind) != kind) continue;
    entries.push_back(review::ToJson(e));
  }
  return json{{"entries", entries}};
}

absl::StatusOr<json> Engine::ClaimNext(const json& request) {
  Request r(request);
  const std::string reviewer = r.Str("reviewer_id");
  const std::string stage_name = r.Str("stage");
  RETURN_IF_ERROR(r.Done());
  auto stage = review::ParseStage(stage_name);
  if (!stage.ok()) return FieldError("stage", std::string(stage.status().message()));
  ASSIGN_OR_RETURN(review::ReviewEntry entry, queue_.NextFor(reviewer, *stage));
  return review::ToJson(entry);
}

absl::StatusOr<json> Engine::Release(const std::string& entry_id, const json& request) {
  Request r(request);
  const std::string reviewer = r.Str("reviewer_id");
  RETURN_IF_ERROR(r.Done());
  RETURN_IF_ERROR(queue_.Release(entry_id, reviewer));
  return json{{"entry_id", entry_id}, {"released", true}};
}

absl::StatusOr<json> Engine::GetReview(const std::string& entry_id) const {
  ASSIGN_OR_RETURN(review::ReviewEntry entry, queue_.Get(entry_id));
  return review::ToJson(entry);
}

absl::StatusOr<json> Engine::Decide(const std::string& entry_id, const json& request) {
  Request r(request);
  review::ReviewDecision decision;
  decision.reviewer_id = r.Str("reviewer_id");
  const std::string verdict = r.Str("verdict");
  decision.reason_codes = r.Strs("reason_codes", false);
  decision.note = r.Str("note", false);
  const int64_t version = r.Int("version");
  RETURN_IF_ERROR(r.Done());
  auto v = review::ParseVerdict(verdict);
  if (!v.ok()) return FieldError("verdict", std::string(v.status().message()));
  decision.verdict = *v;

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  decision.timestamp_ms = now;
  ASSIGN_OR_RETURN(review::ReviewEntry entry,
                   queue_.Decide(entry_id, std::move(decision), static_cast<int>(version)));
  RETURN_IF_ERROR(CommitLocked({Mutation::Update(entry_id, entry.version - 1,
                                                 review::ToJson(entry))},
                               now)
                      .status());
  return review::ToJson(entry);
}

absl::StatusOr<json> Engine::Adjudicate(const std::string& entry_id, const json& request) {
  Request r(request);
  const std::string proctor = r.Str("proctor_id");
  const bool confirm = r.Bool("confirm");
  std::vector<std::string> codes = r.Strs("reason_codes", false);
  std::string note = r.Str("note", false);
  const int64_t version = r.Int("version");
  RETURN_IF_ERROR(r.Done());

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  ASSIGN_OR_RETURN(review::ReviewEntry entry,
                   queue_.Adjudicate(entry_id, proctor, confirm, std::move(codes),
                                     std::move(note), now, static_cast<int>(version)));
  RETURN_IF_ERROR(CommitLocked({Mutation::Update(entry_id, entry.version - 1,
                                                 review::ToJson(entry))},
                               now)
                      .status());
  json out = review::ToJson(entry);
  out["session_marked"] = confirm;
  return out;
}

absl::StatusOr<json> Engine::Feedback(const json& query) const {
  Request r(query);
  review::TimeWindow window;
  window.from_ms = r.Int("from_ms");
  window.to_ms = r.Int("to_ms");
  RETURN_IF_ERROR(r.Done());
  if (window.to_ms < window.from_ms) return FieldError("to_ms", "must not precede from_ms");
  std::vector<review::SurveyNote> surveys;
  for (const EntityEnvelope& e : store_->List("survey")) {
    review::SurveyNote note;
    note.note_id = e.entity_id;
    note.timestamp_ms = e.payload.value("timestamp_ms", e.created_ms);
    note.template_id = e.payload.value("template_id", "");
    note.text = e.payload.value("text", "");
    if (window.Contains(note.timestamp_ms)) surveys.push_back(std::move(note));
  }
  return review::ToJson(review::BuildFeedbackReport(queue_.List(), surveys, window,
                                                    config_.review.attention_threshold));
}

// Generation ---------------------------------------------------------------

absl::StatusOr<json> Engine::GeneratePassage(const json& request) {
  Request r(request);
  const std::string category_name = r.Str("category");
  const std::string topic = r.Str("topic");
  const int64_t seed = r.Int("seed");
  itemgen::PassageConstraints constraints = config_.generation.passage;
  constraints.min_words = static_cast<int>(r.Int("min_words", false, constraints.min_words));
  constraints.max_words = static_cast<int>(r.Int("max_words", false, constraints.max_words));
  RETURN_IF_ERROR(r.Done());
  auto category = itemgen::ParseCategory(category_name);
  if (!category.ok()) return FieldError("category", std::string(category.status().message()));
  if (constraints.min_words < 1 || constraints.max_words < constraints.min_words) {
    return FieldError("max_words", "need 1 <= min_words <= max_words");
  }
  constraints.category = *category;
  auto prompt = itemgen::AssemblePrompt(resources_->prompt_template, resources_->exemplars,
                                        {*category, topic});
  if (!prompt.ok()) return AsFieldError(prompt.status(), "topic");

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  const std::string passage_id = NewIdLocked();
  ASSIGN_OR_RETURN(itemgen::Passage passage,
                   itemgen::GeneratePassage(*resources_->provider, *prompt, constraints,
                                            static_cast<uint64_t>(seed), passage_id));
  json payload = itemgen::ToJson(passage);
  payload["topic"] = topic;
  RETURN_IF_ERROR(CommitLocked({Mutation::Put(passage_id, "passage", payload)}, now).status());
  return payload;
}

absl::StatusOr<json> Engine::GenerateItems(const json& request) {
  Request r(request);
  const std::string passage_id = r.Str("passage_id");
  const int64_t seed = r.Int("seed");
  const bool explicit_alternatives = r.Has("alternatives");
  std::vector<std::string> alternative_ids = r.Strs("alternatives", false);
  RETURN_IF_ERROR(r.Done());

  ASSIGN_OR_RETURN(EntityEnvelope env, store_->Get(passage_id));
  if (env.kind != "passage") return absl::NotFoundError(StrCat("no passage '", passage_id, "'"));
  ASSIGN_OR_RETURN(itemgen::Passage passage, itemgen::PassageFromJson(env.payload));
  std::vector<itemgen::Passage> alternatives;
  if (explicit_alternatives) {
    for (const auto& id : alternative_ids) {
      auto alt = store_->Get(id);
      if (!alt.ok() || alt->kind != "passage") {
        return absl::NotFoundError(StrCat("no passage '", id, "'"));
      }
      ASSIGN_OR_RETURN(itemgen::Passage p, itemgen::PassageFromJson(alt->payload));
      alternatives.push_back(std::move(p));
    }
  } else {
    for (const EntityEnvelope& e : store_->List("passage")) {
      if (e.entity_id == passage_id) continue;
      ASSIGN_OR_RETURN(itemgen::Passage p, itemgen::PassageFromJson(e.payload));
      alternatives.push_back(std::move(p));
    }
  }

  itemgen::BatchConfig batch;
  batch.cloze = config_.generation.cloze;
  batch.completion = config_.generation.completion;
  batch.choice = config_.generation.choice;
  batch.filter = config_.generation.filter;
  batch.comprehension_candidates = config_.generation.comprehension_candidates;
  itemgen::BatchResult built;
  itemgen::BuildItemsForPassage(batch, passage, alternatives, static_cast<uint64_t>(seed),
                                *resources_->provider, *resources_->language_model,
                                *resources_->space, built);

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  // Entries enqueued below must not outlive a failed commit.
  OnExit restore([this] { RestoreQueue().IgnoreError(); });
  std::vector<Mutation> mutations;
  std::vector<review::ReviewEntry> entries;
  json items = json::array();
  for (const itemgen::ItemDraft& draft : built.accepted) {
    const std::string item_entity = NewIdLocked();
    json item = itemgen::ToJson(draft);
    review::Subject subject;
    subject.kind = review::SubjectKind::kItemDraft;
    subject.ref_id = item_entity;
    subject.author_id = StrCat("generator:", resources_->provider->id());
    subject.template_id = passage.provenance.prompt_id;
    subject.item_kind = std::string(itemgen::ItemKindName(draft.kind));
    subject.attachments = {{"item", item}, {"passage_text", passage.text}};
    ASSIGN_OR_RETURN(review::ReviewEntry entry,
                     queue_.Enqueue(NewIdLocked(), std::move(subject), now));
    item["review_id"] = entry.entry_id;
    item["entity_id"] = item_entity;
    mutations.push_back(Mutation::Put(item_entity, "item", item));
    items.push_back(item);
    entries.push_back(std::move(entry));
  }
  json summary = itemgen::ToJson(built);
  ASSIGN_OR_RETURN(json review_ids, StoreEntries(entries, mutations));
  if (!mutations.empty()) {
    RETURN_IF_ERROR(CommitLocked(mutations, now).status());
  }
  restore.Dismiss();
  return json{{"passage_id", passage_id},
              {"items", items},
              {"rejected", summary["rejected"]},
              {"failures", summary["failures"]},
              {"review_ids", review_ids}};
}

// Fairness -----------------------------------------------------------------

absl::StatusOr<json> Engine::AuditDif(const json& request) {
  Request r(request);
  const json* items = r.Array("items");
  RETURN_IF_ERROR(r.Done());
  std::vector<fairness::DifResult> results;
  for (size_t i = 0; i < items->size(); ++i) {
    const json& item = (*items)[i];
    const std::string where = StrCat("items[", i, "]");
    if (!item.is_object() || !item.contains("item_id") || !item["item_id"].is_string() ||
        !item.contains("responses") || !item["responses"].is_array()) {
      return FieldError(where, "expected {item_id, responses}");
    }
    std::vector<fairness::ItemResponse> responses;
    for (size_t k = 0; k < item["responses"].size(); ++k) {
      const json& x = item["responses"][k];
      try {
        fairness::ItemResponse resp;
        resp.taker_id = x.value("taker_id", "");
        resp.focal = x.at("focal").get<bool>();
        resp.correct = x.at("correct").get<bool>();
        resp.total_score = x.at("total_score").get<double>();
        responses.push_back(std::move(resp));
      } catch (const json::exception&) {
        return FieldError(StrCat(where, ".responses[", k, "]"),
                          "expected {focal: bool, correct: bool, total_score: number}");
      }
    }
    fairness::DifResult result;
    result.item_id = item["item_id"].get<std::string>();
    result.mh = fairness::DifMantelHaenszel(responses, config_.fairness.dif);
    result.logistic = fairness::DifLogistic(responses);
    results.push_back(std::move(result));
  }

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  // Entries enqueued below must not outlive a failed commit.
  OnExit restore([this] { RestoreQueue().IgnoreError(); });
  const std::string audit_id = NewIdLocked();
  ASSIGN_OR_RETURN(auto entries,
                   fairness::RouteFlags(results, {}, queue_, [this] { return NewIdLocked(); },
                                        now));
  json out_results = json::array();
  for (const auto& res : results) out_results.push_back(fairness::ToJson(res));
  std::vector<Mutation> mutations;
  ASSIGN_OR_RETURN(json review_ids, StoreEntries(entries, mutations));
  json payload = {{"audit_id", audit_id},
                  {"type", "dif"},
                  {"results", out_results},
                  {"review_ids", review_ids}};
  mutations.insert(mutations.begin(), Mutation::Put(audit_id, "audit", payload));
  RETURN_IF_ERROR(CommitLocked(mutations, now).status());
  restore.Dismiss();
  return payload;
}

absl::StatusOr<json> Engine::AuditDrf(const json& request) {
  Request r(request);
  const std::string scope = r.Str("scope", false, "score");
  const std::string reference = r.Str("reference_group", false);
  const json* records = r.Array("records");
  RETURN_IF_ERROR(r.Done());
  std::vector<fairness::DrfRecord> rows;
  for (size_t i = 0; i < records->size(); ++i) {
    const json& x = (*records)[i];
    try {
      fairness::DrfRecord rec;
      rec.record_id = x.value("record_id", "");
      rec.machine = x.at("machine").get<double>();
      rec.consensus = x.at("consensus").get<double>();
      rec.group = x.at("group").get<std::string>();
      rows.push_back(std::move(rec));
    } catch (const json::exception&) {
      return FieldError(StrCat("records[", i, "]"),
                        "expected {machine: number, consensus: number, group: string}");
    }
  }
  fairness::DrfOptions options;
  if (!reference.empty()) options.reference_group = reference;
  options.coefficient_threshold = config_.fairness.drf_coefficient_threshold;
  options.alpha = config_.fairness.drf_alpha;
  auto result = fairness::DrfAnalysis(scope, rows, options);
  if (!result.ok()) return AsFieldError(result.status(), "records");

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  // Entries enqueued below must not outlive a failed commit.
  OnExit restore([this] { RestoreQueue().IgnoreError(); });
  const std::string audit_id = NewIdLocked();
  ASSIGN_OR_RETURN(auto entries,
                   fairness::RouteFlags({}, {*result}, queue_, [this] { return NewIdLocked(); },
                                        now));
  std::vector<Mutation> mutations;
  ASSIGN_OR_RETURN(json review_ids, StoreEntries(entries, mutations));
  json payload = {{"audit_id", audit_id},
                  {"type", "drf"},
                  {"result", fairness::ToJson(*result)},
                  {"review_ids", review_ids}};
  mutations.insert(mutations.begin(), Mutation::Put(audit_id, "audit", payload));
  RETURN_IF_ERROR(CommitLocked(mutations, now).status());
  restore.Dismiss();
  return payload;
}

absl::StatusOr<json> Engine::AuditRepresentation(const json& request) {
  Request r(request);
  const json* records = r.Array("records");
  const json* targets = r.Array("targets", false);
  const double tolerance =
      r.Num("tolerance", false, config_.fairness.representation_tolerance);
  RETURN_IF_ERROR(r.Done());
  const DemographicVocabulary vocabulary;
  std::vector<fairness::DemographicEntry> entries;
  for (size_t i = 0; i < records->size(); ++i) {
    const json& x = (*records)[i];
    try {
      entries.push_back({x.value("record_id", StrCat("record-", i + 1)),
                         {x.at("gender").get<std::string>(), x.at("l1").get<std::string>()}});
    } catch (const json::exception&) {
      return FieldError(StrCat("records[", i, "]"), "expected {gender, l1}");
    }
  }
  std::map<fairness::Cell, double> target_map;
  if (targets != nullptr) {
    for (size_t i = 0; i < targets->size(); ++i) {
      const json& x = (*targets)[i];
      try {
        target_map[{x.at("gender").get<std::string>(), x.at("l1").get<std::string>()}] =
            x.at("target").get<double>();
      } catch (const json::exception&) {
        return FieldError(StrCat("targets[", i, "]"), "expected {gender, l1, target}");
      }
    }
  } else {
    target_map = fairness::UniformTargets(vocabulary);
  }
  auto report = fairness::BuildRepresentationReport(entries, target_map, tolerance, vocabulary);
  if (!report.ok()) return AsFieldError(report.status(), "records");

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  const std::string audit_id = NewIdLocked();
  json payload = {{"audit_id", audit_id},
                  {"type", "representation"},
                  {"report", RepresentationJson(*report)}};
  RETURN_IF_ERROR(CommitLocked({Mutation::Put(audit_id, "audit", payload)}, now).status());
  return payload;
}

// Monitor ------------------------------------------------------------------

absl::StatusOr<std::vector<monitor::SessionRecord>> Engine::Sessions(const json& request) const {
  const DemographicVocabulary vocabulary;
  if (request.is_object() && request.contains("sessions")) {
    const json& list = request["sessions"];
    if (!list.is_array()) return FieldError("sessions", "expected an array");
    std::string jsonl;
    for (const auto& s : list) jsonl += s.dump() + "\n";
    auto parsed = monitor::ParseSessions(jsonl, vocabulary);
    if (!parsed.ok()) return FieldError("sessions", std::string(parsed.status().message()));
    return parsed;
  }
  ASSIGN_OR_RETURN(std::string text, text::ReadFile(config_.monitor.sessions));
  return monitor::ParseSessions(text, vocabulary);
}

absl::StatusOr<json> Engine::MonitorRun(const json& request) {
  Request r(request);
  const int64_t week = r.Int("week");
  r.Allow("sessions");
  RETURN_IF_ERROR(r.Done());
  ASSIGN_OR_RETURN(auto sessions, Sessions(request));
  std::optional<monitor::Mix> baseline;
  if (auto baselines = store_->List("monitor_baseline"); !baselines.empty()) {
    ASSIGN_OR_RETURN(baseline, monitor::MixFromJson(baselines.back().payload.at("mix")));
  }
  monitor::MonitorOptions options;
  options.top_exposure = config_.monitor.top_exposure;
  ASSIGN_OR_RETURN(monitor::MonitorReport report,
                   monitor::RunWeek(sessions, static_cast<int>(week), baseline,
                                    config_.monitor.alert_rules, options));

  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  // Entries enqueued below must not outlive a failed commit.
  OnExit restore([this] { RestoreQueue().IgnoreError(); });
  const std::string report_id = NewIdLocked();
  ASSIGN_OR_RETURN(auto entries, monitor::OpenAlertReviews(
                                     report, queue_, [this] { return NewIdLocked(); }, now));
  std::vector<Mutation> mutations;
  ASSIGN_OR_RETURN(json review_ids, StoreEntries(entries, mutations));
  json payload = {{"report_id", report_id},
                  {"week", week},
                  {"report", monitor::ToJson(report)},
                  {"summary", monitor::Summary(report)},
                  {"review_ids", review_ids}};
  mutations.insert(mutations.begin(), Mutation::Put(report_id, "monitor_report", payload));
  RETURN_IF_ERROR(CommitLocked(mutations, now).status());
  restore.Dismiss();
  return payload;
}

absl::StatusOr<json> Engine::SetBaseline(const json& request) {
  Request r(request);
  const bool has_mix = r.Has("mix");
  const int64_t week = r.Int("week", !has_mix);
  r.Allow("sessions");
  RETURN_IF_ERROR(r.Done());
  monitor::Mix mix;
  if (has_mix) {
    auto parsed = monitor::MixFromJson(request["mix"]);
    if (!parsed.ok()) return FieldError("mix", std::string(parsed.status().message()));
    mix = *std::move(parsed);
  } else {
    ASSIGN_OR_RETURN(auto sessions, Sessions(request));
    std::vector<monitor::SessionRecord> in_week;
    for (auto& s : sessions) {
      if (s.week == week) in_week.push_back(std::move(s));
    }
    if (in_week.empty()) {
      return absl::FailedPreconditionError(StrCat("no sessions in week ", week));
    }
    mix = monitor::DemographicMix(in_week, DemographicVocabulary{});
  }
  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  const std::string id = NewIdLocked();
  json payload = {{"baseline_id", id}, {"mix", monitor::ToJson(mix)}};
  if (!has_mix) payload["week"] = week;
  RETURN_IF_ERROR(CommitLocked({Mutation::Put(id, "monitor_baseline", payload)}, now).status());
  return payload;
}

absl::StatusOr<json> Engine::MonitorReport(int week) const {
  const auto reports = store_->List("monitor_report");
  for (auto it = reports.rbegin(); it != reports.rend(); ++it) {
    if (it->payload.value("week", -1) == week) return it->payload;
  }
  return absl::NotFoundError(StrCat("no monitor report for week ", week));
}

// Models and exam change proposals -----------------------------------------

absl::StatusOr<json> Engine::RegisterModel(const json& request) {
  Request r(request);
  const std::string version = r.Str("version");
  const json* model = r.Object("model");
  RETURN_IF_ERROR(r.Done());
  auto scorer = scoring::ParseScorer(model->dump());
  if (!scorer.ok()) return FieldError("model", std::string(scorer.status().message()));
  const auto schema = features::FeatureSchema(resources_->rules);
  bool matches = schema.size() == scorer->schema.size();
  for (size_t i = 0; matches && i < schema.size(); ++i) {
    matches = schema[i].first == scorer->schema[i].name && schema[i].second == scorer->schema[i].group;
  }
  if (!matches) return FieldError("model", "feature schema differs from the service schema");

  std::lock_guard<std::mutex> lock(mu_);
  if (version == config_.scoring.model_version) {
    return absl::AlreadyExistsError(StrCat("model version ", version, " already exists"));
  }
  for (const auto& e : store_->List("model")) {
    if (e.payload.at("version") == version) {
      return absl::AlreadyExistsError(StrCat("model version ", version, " already exists"));
    }
  }
  BeginOpLocked();
  const int64_t now = NowLocked();
  const std::string id = NewIdLocked();
  json payload = {{"model_id", id}, {"version", version}, {"model", *model}};
  RETURN_IF_ERROR(CommitLocked({Mutation::Put(id, "model", payload)}, now).status());
  return json{{"model_id", id}, {"version", version}};
}

absl::StatusOr<json> Engine::CreateEcp(const json& request) {
  Request r(request);
  std::string description = r.Str("description");
  std::vector<std::string> evidence = r.Strs("evidence", false);
  std::vector<std::string> roles = r.Strs("required_roles");
  std::string model_version = r.Str("model_version", false);
  RETURN_IF_ERROR(r.Done());
  if (!model_version.empty()) {
    const auto models = store_->List("model");
    if (std::none_of(models.begin(), models.end(), [&](const EntityEnvelope& e) {
          return e.payload.at("version") == model_version;
        })) {
      return absl::NotFoundError(StrCat("no registered model version '", model_version, "'"));
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  BeginOpLocked();
  const int64_t now = NowLocked();
  const std::string id = NewIdLocked();
  auto record = review::RecordEcp(id, std::move(description), std::move(evidence),
                                  std::move(roles), std::move(model_version), now);
  if (!record.ok()) return AsFieldError(record.status(), "required_roles");
  json payload = review::ToJson(*record);
  RETURN_IF_ERROR(CommitLocked({Mutation::Put(id, "ecp", payload)}, now).status());
  return payload;
}

absl::StatusOr<json> Engine::GetEcp(const std::string& ecp_id) const {
  ASSIGN_OR_RETURN(EntityEnvelope e, store_->Get(ecp_id));
  if (e.kind != "ecp") return absl::NotFoundError(StrCat("no exam change proposal '", ecp_id, "'"));
  json out = e.payload;
  ASSIGN_OR_RETURN(review::EcpRecord record, review::EcpFromJson(e.payload));
  out["missing_roles"] = review::MissingRoles(record);
  out["version"] = e.version;
  return out;
}

absl::StatusOr<json> Engine::ApproveEcp(const std::string& ecp_id, const json& request) {
  Request r(request);
  const std::string approver = r.Str("approver_id");
  const std::string role = r.Str("role");
  RETURN_IF_ERROR(r.Done());
  std::lock_guard<std::mutex> lock(mu_);
  ASSIGN_OR_RETURN(EntityEnvelope e, store_->Get(ecp_id));
  if (e.kind != "ecp") return absl::NotFoundError(StrCat("no exam change proposal '", ecp_id, "'"));
  ASSIGN_OR_RETURN(review::EcpRecord record, review::EcpFromJson(e.payload));
  BeginOpLocked();
  const int64_t now = NowLocked();
  RETURN_IF_ERROR(review::ApproveEcp(record, approver, role, now));
  json payload = review::ToJson(record);
  RETURN_IF_ERROR(CommitLocked({Mutation::Update(ecp_id, e.version, payload)}, now).status());
  payload["missing_roles"] = review::MissingRoles(record);
  return payload;
}

absl::StatusOr<json> Engine::LaunchEcp(const std::string& ecp_id) {
  std::lock_guard<std::mutex> lock(mu_);
  ASSIGN_OR_RETURN(EntityEnvelope e, store_->Get(ecp_id));
  if (e.kind != "ecp") return absl::NotFoundError(StrCat("no exam change proposal '", ecp_id, "'"));
  ASSIGN_OR_RETURN(review::EcpRecord record, review::EcpFromJson(e.payload));
  std::vector<review::EcpRecord> others;
  for (const auto& o : store_->List("ecp")) {
    if (o.entity_id == ecp_id) continue;
    ASSIGN_OR_RETURN(review::EcpRecord other, review::EcpFromJson(o.payload));
    others.push_back(std::move(other));
  }
  BeginOpLocked();
  const int64_t now = NowLocked();
  RETURN_IF_ERROR(review::LaunchEcp(record, others, now));
  json payload = review::ToJson(record);
  std::vector<Mutation> mutations = {Mutation::Update(ecp_id, e.version, payload)};
  if (!record.model_version.empty()) {
    std::string model_id;
    for (const auto& m : store_->List("model")) {
      if (m.payload.at("version") == record.model_version) model_id = m.entity_id;
    }
    if (model_id.empty()) {
      return absl::NotFoundError(StrCat("no registered model version '", record.model_version, "'"));
    }
    json active = {{"version", record.model_version}, {"model_id", model_id}, {"ecp_id", ecp_id}};
    auto current = store_->Get(kActiveModelId);
    mutations.push_back(current.ok() ? Mutation::Update(kActiveModelId, current->version, active)
                                     : Mutation::Put(kActiveModelId, "active_model", active));
  }
  RETURN_IF_ERROR(CommitLocked(mutations, now).status());
  return payload;
}

}  // namespace assesskit::platform
