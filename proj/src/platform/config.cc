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

#include "assesskit/platform/config.h"

#include <cstdlib>
#include <filesystem>
#include <set>

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/corpus.h"

#ifndef ASSESSKIT_DATA_DIR
#define ASSESSKIT_DATA_DIR "data"
#endif

namespace assesskit::platform {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

// Reads the keys of one JSON object into typed fields and remembers which
// ones it saw, so leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) error_ = StrCat(path_, ": expected an object");
  }

  template <typename T>
  void Take(const char* key, T& field) {
    seen_.insert(key);
    if (!error_.empty() || !j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
        if (std::is_unsigned_v<T> && v.get<int64_t>() < 0) {
          throw std::invalid_argument("expected a non-negative integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
      }
      field = v.get<T>();
    } catch (const std::exception& e) {
      error_ = StrCat(path_, ".", key, ": ", e.what());
    }
  }

  // Nested object, or nullptr when absent.
  const json* Child(const char* key) {
    seen_.insert(key);
    if (!error_.empty() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  void Fail(std::string message) {
    if (error_.empty()) error_ = std::move(message);
  }

  absl::Status Finish() const {
    if (!error_.empty()) return absl::InvalidArgumentError(StrCat("config: ", error_));
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) {
        return absl::InvalidArgumentError(StrCat("config: unknown key ", path_, ".", key));
      }
    }
    return absl::OkStatus();
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
  std::string error_;
};

absl::Status ReadStore(const json& j, StoreConfig& c) {
  Section s(j, "store");
  s.Take("path", c.path);
  s.Take("fsync", c.options.fsync);
  s.Take("snapshot_every", c.options.snapshot_every);
  s.Take("logical_clock", c.logical_clock);
  s.Take("logical_epoch_ms", c.logical_epoch_ms);
  s.Take("id_seed", c.id_seed);
  return s.Finish();
}

absl::Status ReadServer(const json& j, ServerConfig& c) {
  Section s(j, "server");
  s.Take("host", c.host);
  s.Take("port", c.port);
  s.Take("threads", c.threads);
  if (c.threads < 1) s.Fail("server.threads: must be at least 1");
  return s.Finish();
}

absl::Status ReadResources(const json& j, ResourcesConfig& c) {
  Section s(j, "resources");
  s.Take("reference_corpus", c.reference_corpus);
  s.Take("lsa_dimensions", c.lsa_dimensions);
  s.Take("cefr_wordlist", c.cefr_wordlist);
  s.Take("dwu_low", c.dwu_low);
  s.Take("dwu_high", c.dwu_high);
  s.Take("dwu_order", c.dwu_order);
  s.Take("grammar_rules", c.grammar_rules);
  return s.Finish();
}

absl::Status ReadScoring(const json& j, ScoringConfig& c) {
  Section s(j, "scoring");
  s.Take("model_path", c.model_path);
  s.Take("model_version", c.model_version);
  return s.Finish();
}

absl::Status ReadPlagiarism(const json& j, PlagiarismConfig& c) {
  Section s(j, "plagiarism");
  s.Take("sources", c.sources);
  s.Take("k", c.winnow.k);
  s.Take("w", c.winnow.w);
  s.Take("threshold", c.threshold);
  if (absl::Status v = c.winnow.Validate(); !v.ok()) {
    s.Fail(StrCat("plagiarism: ", v.message()));
  }
  if (!(c.threshold > 0.0 && c.threshold <= 1.0)) s.Fail("plagiarism.threshold: must be in (0, 1]");
  return s.Finish();
}

absl::Status ReadGeneration(const json& j, GenerationConfig& c) {
  Section s(j, "generation");
  s.Take("provider", c.provider);
  s.Take("template", c.template_path);
  s.Take("corpus", c.corpus);
  s.Take("language_model_order", c.language_model_order);
  s.Take("comprehension_candidates", c.comprehension_candidates);
  if (c.provider != "mock" && c.provider != "http") {
    s.Fail("generation.provider: must be mock or http");
  }
  if (const json* p = s.Child("passage")) {
    Section t(*p, "generation.passage");
    t.Take("min_words", c.passage.min_words);
    t.Take("max_words", c.passage.max_words);
    t.Take("max_attempts", c.passage.max_attempts);
    t.Take("max_tokens", c.passage.max_tokens);
    RETURN_IF_ERROR(t.Finish());
  }
  if (const json* p = s.Child("cloze")) {
    Section t(*p, "generation.cloze");
    t.Take("blanks", c.cloze.blanks);
    t.Take("min_gap", c.cloze.min_gap);
    t.Take("band_low", c.cloze.band_low);
    t.Take("band_high", c.cloze.band_high);
    t.Take("likelihood_weight", c.cloze.likelihood_weight);
    t.Take("semantic_weight", c.cloze.semantic_weight);
    t.Take("min_tokens", c.cloze.min_tokens);
    t.Take("distractors", c.cloze.distractors);
    RETURN_IF_ERROR(t.Finish());
  }
  if (const json* p = s.Child("completion")) {
    Section t(*p, "generation.completion");
    t.Take("alternatives", c.completion.alternatives);
    t.Take("similarity_floor", c.completion.similarity_floor);
    t.Take("similarity_ceiling", c.completion.similarity_ceiling);
    RETURN_IF_ERROR(t.Finish());
  }
  if (const json* p = s.Child("choice")) {
    Section t(*p, "generation.choice");
    t.Take("band_low", c.choice.band_low);
    t.Take("band_high", c.choice.band_high);
    RETURN_IF_ERROR(t.Finish());
  }
  if (const json* p = s.Child("filter")) {
    Section t(*p, "generation.filter");
    t.Take("min_stem_tokens", c.filter.min_stem_tokens);
    t.Take("max_stem_tokens", c.filter.max_stem_tokens);
    t.Take("min_option_tokens", c.filter.min_option_tokens);
    t.Take("max_option_tokens", c.filter.max_option_tokens);
    t.Take("min_alignment", c.filter.min_alignment);
    t.Take("reject_duplicates", c.filter.reject_duplicates);
    RETURN_IF_ERROR(t.Finish());
  }
  if (c.passage.min_words < 1 || c.passage.max_words < c.passage.min_words) {
    s.Fail("generation.passage: need 1 <= min_words <= max_words");
  }
  return s.Finish();
}

absl::Status ReadReview(const json& j, ReviewConfig& c) {
  Section s(j, "review");
  s.Take("reason_codes", c.reason_codes);
  s.Take("attention_threshold", c.attention_threshold);
  if (c.reason_codes.empty()) s.Fail("review.reason_codes: must not be empty");
  return s.Finish();
}

absl::Status ReadFairness(const json& j, FairnessConfig& c) {
  Section s(j, "fairness");
  s.Take("dif_alpha", c.dif.alpha);
  s.Take("dif_b_delta", c.dif.b_delta);
  s.Take("dif_c_delta", c.dif.c_delta);
  s.Take("drf_coefficient_threshold", c.drf_coefficient_threshold);
  s.Take("drf_alpha", c.drf_alpha);
  s.Take("representation_tolerance", c.representation_tolerance);
  return s.Finish();
}

absl::Status ReadMonitor(const json& j, MonitorConfig& c, const std::string& base_dir) {
  Section s(j, "monitor");
  s.Take("sessions", c.sessions);
  s.Take("top_exposure", c.top_exposure);
  if (const json* rules = s.Child("alert_rules")) {
    if (rules->is_string()) {
      ASSIGN_OR_RETURN(std::string text,
                       text::ReadFile(Resolve(base_dir, rules->get<std::string>())));
      json parsed = json::parse(text, nullptr, false);
      if (parsed.is_discarded()) {
        return absl::InvalidArgumentError("config: monitor.alert_rules file is not JSON");
      }
      ASSIGN_OR_RETURN(c.alert_rules, monitor::ParseAlertRules(parsed));
    } else {
      ASSIGN_OR_RETURN(c.alert_rules, monitor::ParseAlertRules(*rules));
    }
  }
  return s.Finish();
}

}  // namespace

std::string DefaultDataDir() { return ASSESSKIT_DATA_DIR; }

Config DefaultConfig(const std::string& data_dir) {
  Config c;
  auto data = [&](const char* name) { return (fs::path(data_dir) / name).string(); };
  c.resources.reference_corpus = data("passages.jsonl");
  c.resources.cefr_wordlist = data("cefr_wordlist.tsv");
  c.resources.dwu_low = data("dwu_low.txt");
  c.resources.dwu_high = data("dwu_high.txt");
  c.scoring.model_path = data("models/scorer_v1.json");
  c.plagiarism.sources = data("sources.jsonl");
  c.generation.template_path = data("templates/reading_passage.txt");
  c.generation.corpus = data("passages.jsonl");
  c.monitor.sessions = data("sessions.jsonl");
  // A PSI above 0.25 is the conventional mark of a major population shift.
  c.monitor.alert_rules = {
      {"psi-gender", "psi.gender", 0.25, monitor::Direction::kAbove, true},
      {"psi-l1", "psi.l1", 0.25, monitor::Direction::kAbove, true},
  };
  return c;
}

absl::StatusOr<Config> ParseConfig(std::string_view json_text, const std::string& base_dir) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError("config: not valid JSON");
  Config c = DefaultConfig();
  Section root(j, "config");
  if (const json* p = root.Child("store")) RETURN_IF_ERROR(ReadStore(*p, c.store));
  if (const json* p = root.Child("server")) RETURN_IF_ERROR(ReadServer(*p, c.server));
  if (const json* p = root.Child("resources")) RETURN_IF_ERROR(ReadResources(*p, c.resources));
  if (const json* p = root.Child("scoring")) RETURN_IF_ERROR(ReadScoring(*p, c.scoring));
  if (const json* p = root.Child("plagiarism")) RETURN_IF_ERROR(ReadPlagiarism(*p, c.plagiarism));
  if (const json* p = root.Child("generation")) RETURN_IF_ERROR(ReadGeneration(*p, c.generation));
  if (const json* p = root.Child("review")) RETURN_IF_ERROR(ReadReview(*p, c.review));
  if (const json* p = root.Child("fairness")) RETURN_IF_ERROR(ReadFairness(*p, c.fairness));
  if (const json* p = root.Child("monitor")) RETURN_IF_ERROR(ReadMonitor(*p, c.monitor, base_dir));
  RETURN_IF_ERROR(root.Finish());

  if (j.contains("store") && j["store"].contains("path")) {
    c.store.path = Resolve(base_dir, c.store.path);
  }
  for (std::string* path :
       {&c.resources.reference_corpus, &c.resources.cefr_wordlist, &c.resources.dwu_low,
        &c.resources.dwu_high, &c.resources.grammar_rules, &c.scoring.model_path,
        &c.plagiarism.sources, &c.generation.template_path, &c.generation.corpus,
        &c.monitor.sessions}) {
    *path = Resolve(base_dir, *path);
  }
  return c;
}

absl::StatusOr<Config> LoadConfig(const std::string& path) {
  auto text = text::ReadFile(path);
  if (!text.ok()) return absl::NotFoundError(StrCat("config file not found: ", path));
  const std::string base = fs::absolute(path).parent_path().string();
  return ParseConfig(*text, base);
}

absl::StatusOr<Config> ResolveConfig(const std::string& flag_path) {
  if (!flag_path.empty()) return LoadConfig(flag_path);
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
    return LoadConfig(env);
  }
  return DefaultConfig();
}

json ToJson(const Config& c) {
  json rules = json::array();
  for (const auto& r : c.monitor.alert_rules) {
    rules.push_back({{"rule_id", r.rule_id},
                     {"metric", r.metric},
                     {"threshold", r.threshold},
                     {"direction", r.direction == monitor::Direction::kAbove ? "above" : "below"},
                     {"open_review", r.open_review}});
  }
  return {
      {"store",
       {{"path", c.store.path},
        {"fsync", c.store.options.fsync},
        {"snapshot_every", c.store.options.snapshot_every},
        {"logical_clock", c.store.logical_clock},
        {"logical_epoch_ms", c.store.logical_epoch_ms},
        {"id_seed", c.store.id_seed}}},
      {"server", {{"host", c.server.host}, {"port", c.server.port}, {"threads", c.server.threads}}},
      {"resources",
       {{"reference_corpus", c.resources.reference_corpus},
        {"lsa_dimensions", c.resources.lsa_dimensions},
        {"cefr_wordlist", c.resources.cefr_wordlist},
        {"dwu_low", c.resources.dwu_low},
        {"dwu_high", c.resources.dwu_high},
        {"dwu_order", c.resources.dwu_order},
        {"grammar_rules", c.resources.grammar_rules}}},
      {"scoring", {{"model_path", c.scoring.model_path}, {"model_version", c.scoring.model_version}}},
      {"plagiarism",
       {{"sources", c.plagiarism.sources},
        {"k", c.plagiarism.winnow.k},
        {"w", c.plagiarism.winnow.w},
        {"threshold", c.plagiarism.threshold}}},
      {"generation",
       {{"provider", c.generation.provider},
        {"template", c.generation.template_path},
        {"corpus", c.generation.corpus},
        {"language_model_order", c.generation.language_model_order},
        {"comprehension_candidates", c.generation.comprehension_candidates},
        {"passage",
         {{"min_words", c.generation.passage.min_words},
          {"max_words", c.generation.passage.max_words},
          {"max_attempts", c.generation.passage.max_attempts},
          {"max_tokens", c.generation.passage.max_tokens}}},
        {"cloze",
         {{"blanks", c.generation.cloze.blanks},
          {"min_gap", c.generation.cloze.min_gap},
          {"band_low", c.generation.cloze.band_low},
          {"band_high", c.generation.cloze.band_high},
          {"likelihood_weight", c.generation.cloze.likelihood_weight},
          {"semantic_weight", c.generation.cloze.semantic_weight},
          {"min_tokens", c.generation.cloze.min_tokens},
          {"distractors", c.generation.cloze.distractors}}},
        {"completion",
         {{"alternatives", c.generation.completion.alternatives},
          {"similarity_floor", c.generation.completion.similarity_floor},
          {"similarity_ceiling", c.generation.completion.similarity_ceiling}}},
        {"choice",
         {{"band_low", c.generation.choice.band_low},
          {"band_high", c.generation.choice.band_high}}},
        {"filter",
         {{"min_stem_tokens", c.generation.filter.min_stem_tokens},
          {"max_stem_tokens", c.generation.filter.max_stem_tokens},
          {"min_option_tokens", c.generation.filter.min_option_tokens},
          {"max_option_tokens", c.generation.filter.max_option_tokens},
          {"min_alignment", c.generation.filter.min_alignment},
          {"reject_duplicates", c.generation.filter.reject_duplicates}}}}},
      {"review",
       {{"reason_codes", c.review.reason_codes},
        {"attention_threshold", c.review.attention_threshold}}},
      {"fairness",
       {{"dif_alpha", c.fairness.dif.alpha},
        {"dif_b_delta", c.fairness.dif.b_delta},
        {"dif_c_delta", c.fairness.dif.c_delta},
        {"drf_coefficient_threshold", c.fairness.drf_coefficient_threshold},
        {"drf_alpha", c.fairness.drf_alpha},
        {"representation_tolerance", c.fairness.representation_tolerance}}},
      {"monitor",
       {{"sessions", c.monitor.sessions},
        {"top_exposure", c.monitor.top_exposure},
        {"alert_rules", rules}}},
  };
}

}  // namespace assesskit::platform
