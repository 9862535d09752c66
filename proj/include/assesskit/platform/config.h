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

#ifndef ASSESSKIT_PLATFORM_CONFIG_H_
#define ASSESSKIT_PLATFORM_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/fairness/dif.h"
#include "assesskit/fairness/representation.h"
#include "assesskit/itemgen/builders.h"
#include "assesskit/itemgen/filter.h"
#include "assesskit/monitor/monitor.h"
#include "assesskit/plagiarism/detector.h"
#include "assesskit/platform/store.h"
#include "assesskit/review/feedback.h"
#include "assesskit/review/workflow.h"
#include "json.hpp"

namespace assesskit::platform {

// Environment variable naming the config file when no flag is given.
inline constexpr char kConfigEnv[] = "ASSESSKIT_CONFIG";

// Directory of the bundled data files; relative default paths live here.
std::string DefaultDataDir();

struct StoreConfig {
  std::string path = "assesskit-store";
  StoreOptions options;
  // Deterministic timestamps and ids derived from the store sequence.
  bool logical_clock = false;
  int64_t logical_epoch_ms = 1767225600000;  // 2026-01-01T00:00:00Z
  uint64_t id_seed = 0;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  int threads = 8;
};

struct ResourcesConfig {
  std::string reference_corpus;  // IDF and LSA training documents
  int lsa_dimensions = 16;
  std::string cefr_wordlist;
  std::string dwu_low;
  std::string dwu_high;
  int dwu_order = 1;
  std::string grammar_rules;  // empty: bundled rules
};

struct ScoringConfig {
  // Model used until an exam change proposal activates another one.
  std::string model_path;
  std::string model_version = "v1";
};

struct PlagiarismConfig {
  std::string sources;
  plagiarism::WinnowParams winnow;
  double threshold = plagiarism::kDefaultThreshold;
};

struct GenerationConfig {
  std::string provider = "mock";  // "mock" or "http"
  std::string template_path;
  // Mock provider corpus, exemplar pool and language-model training text.
  std::string corpus;
  int language_model_order = 2;
  itemgen::PassageConstraints passage;
  itemgen::ClozeParams cloze;
  itemgen::TextCompletionParams completion;
  itemgen::ChoiceParams choice;
  itemgen::FilterThresholds filter;
  int comprehension_candidates = 10;
};

struct ReviewConfig {
  std::vector<std::string> reason_codes = review::DefaultReasonCodes();
  double attention_threshold = review::kDefaultAttentionThreshold;
};

struct FairnessConfig {
  fairness::DifThresholds dif;
  double drf_coefficient_threshold = 0.1;
  double drf_alpha = 0.05;
  double representation_tolerance = fairness::kDefaultRepresentationTolerance;
};

struct MonitorConfig {
  std::string sessions;
  std::vector<monitor::AlertRule> alert_rules;
  size_t top_exposure = 10;
};

// Every module parameter in one place. Provider credentials never appear
// here; they are read from the environment.
struct Config {
  StoreConfig store;
  ServerConfig server;
  ResourcesConfig resources;
  ScoringConfig scoring;
  PlagiarismConfig plagiarism;
  GenerationConfig generation;
  ReviewConfig review;
  FairnessConfig fairness;
  MonitorConfig monitor;
};

// Defaults with data paths under `data_dir`.
Config DefaultConfig(const std::string& data_dir = DefaultDataDir());

// JSON document with the section layout of Config. Missing keys keep their
// defaults; unknown keys are errors. Relative paths resolve against
// `base_dir`.
absl::StatusOr<Config> ParseConfig(std::string_view json_text, const std::string& base_dir);
absl::StatusOr<Config> LoadConfig(const std::string& path);

// Flag value if non-empty, else $ASSESSKIT_CONFIG, else defaults.
absl::StatusOr<Config> ResolveConfig(const std::string& flag_path);

nlohmann::json ToJson(const Config& config);

}  // namespace assesskit::platform

#endif  // ASSESSKIT_PLATFORM_CONFIG_H_
