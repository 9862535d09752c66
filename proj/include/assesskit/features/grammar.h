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

#ifndef ASSESSKIT_FEATURES_GRAMMAR_H_
#define ASSESSKIT_FEATURES_GRAMMAR_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace assesskit::features {

// A rule matches a window of consecutive tokens. Each pattern element lists
// alternatives; an alternative is a literal lowercase token or one of
//   <any>        any token
//   <word>       an alphabetic token
//   <vowel>      a word read with an initial vowel sound ("apple", "hour")
//   <consonant>  a word read with an initial consonant sound ("cat", "unit")
//   <same>       the token matched by the previous element
struct GrammarRule {
  std::string rule_id;
  std::string error_type;
  std::vector<std::vector<std::string>> pattern;

  // True when the rule matches tokens starting at `start`.
  bool MatchesAt(std::span<const std::string> tokens, size_t start) const;
};

// Parses {"rules": [{"id", "error_type", "pattern"}]}.
absl::StatusOr<std::vector<GrammarRule>> ParseGrammarRules(
    std::string_view json_text);
absl::StatusOr<std::vector<GrammarRule>> LoadGrammarRules(
    const std::string& path);

// Article misuse, elementary be/has/have agreement and doubled words.
std::vector<GrammarRule> BundledGrammarRules();

// Distinct error types in first-appearance order.
std::vector<std::string> ErrorTypes(std::span<const GrammarRule> rules);

// Maps a sentence to a syntactic depth estimate (>= 1).
class DepthProvider {
 public:
  virtual ~DepthProvider() = default;
  virtual int Depth(std::string_view sentence) const = 0;
};

// 1 + number of subordination markers ("because", "which", ...).
class MarkerDepthProvider : public DepthProvider {
 public:
  int Depth(std::string_view sentence) const override;
  static bool IsSubordinationMarker(std::string_view token);
};

}  // namespace assesskit::features

#endif  // ASSESSKIT_FEATURES_GRAMMAR_H_
