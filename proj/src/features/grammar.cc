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

#include "assesskit/features/grammar.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "absl/status/status.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/corpus.h"
#include "assesskit/text/tokenizer.h"
#include "json.hpp"

namespace assesskit::features {
namespace {

constexpr std::array<std::string_view, 20> kConsonantSoundExceptions = {
    "one",     "once",    "unit",    "united", "unique",  "union",  "uniform",
    "universe", "university", "use", "used",  "useful",  "user",   "usual",
    "usually", "utility", "euro",    "european", "unicorn", "ewe"};

constexpr std::array<std::string_view, 8> kVowelSoundExceptions = {
    "hour", "hours", "hourly", "honest", "honestly", "honor", "honour", "heir"};

constexpr std::array<std::string_view, 19> kSubordinationMarkers = {
    "because", "although", "though", "while",    "since", "unless", "whereas",
    "if",      "when",     "whenever", "which",  "who",   "whom",   "whose",
    "after",   "before",   "until",  "where",    "whether"};

template <size_t N>
bool Contains(const std::array<std::string_view, N>& list,
              std::string_view token) {
  return std::find(list.begin(), list.end(), token) != list.end();
}

bool IsAlphabetic(std::string_view token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](char c) {
           return std::isalpha(static_cast<unsigned char>(c)) || c == '\'';
         });
}

bool StartsWithVowelSound(std::string_view token) {
  if (Contains(kVowelSoundExceptions, token)) return true;
  if (Contains(kConsonantSoundExceptions, token)) return false;
  const char c = token.empty() ? '\0' : token.front();
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool ElementMatches(std::string_view alternative, std::string_view token,
                    std::string_view previous) {
  if (alternative == "<any>") return true;
  if (alternative == "<word>") return IsAlphabetic(token);
  if (alternative == "<vowel>") {
    return IsAlphabetic(token) && StartsWithVowelSound(token);
  }
  if (alternative == "<consonant>") {
    return IsAlphabetic(token) && !StartsWithVowelSound(token);
  }
  if (alternative == "<same>") return token == previous;
  return alternative == token;
}

bool IsKnownMarker(std::string_view alternative) {
  return alternative == "<any>" || alternative == "<word>" ||
         alternative == "<vowel>" || alternative == "<consonant>" ||
         alternative == "<same>";
}

}  // namespace

bool GrammarRule::MatchesAt(std::span<const std::string> tokens,
                            size_t start) const {
  if (pattern.empty() || start + pattern.size() > tokens.size()) return false;
  for (size_t i = 0; i < pattern.size(); ++i) {
    const std::string_view previous =
        start + i > 0 ? std::string_view(tokens[start + i - 1]) : "";
    const bool any = std::any_of(
        pattern[i].begin(), pattern[i].end(), [&](const std::string& alt) {
          return ElementMatches(alt, tokens[start + i], previous);
        });
    if (!any) return false;
  }
  return true;
}

absl::StatusOr<std::vector<GrammarRule>> ParseGrammarRules(
    std::string_view json_text) {
  const auto json = nlohmann::json::parse(json_text, nullptr, false);
  if (json.is_discarded() || !json.is_object() || !json.contains("rules") ||
      !json["rules"].is_array()) {
    return absl::InvalidArgumentError(
        "grammar rules: expected an object with a \"rules\" array");
  }
  std::vector<GrammarRule> rules;
  for (size_t r = 0; r < json["rules"].size(); ++r) {
    const auto& entry = json["rules"][r];
    const std::string where = StrCat("grammar rule #", r);
    if (!entry.is_object() || !entry.contains("id") ||
        !entry["id"].is_string() || !entry.contains("error_type") ||
        !entry["error_type"].is_string() || !entry.contains("pattern") ||
        !entry["pattern"].is_array() || entry["pattern"].empty()) {
      return absl::InvalidArgumentError(
          StrCat(where, ": needs string id, error_type and a "
                              "non-empty pattern array"));
    }
    GrammarRule rule;
    rule.rule_id = entry["id"].get<std::string>();
    rule.error_type = entry["error_type"].get<std::string>();
    for (const auto& element : entry["pattern"]) {
      std::vector<std::string> alternatives;
      if (element.is_string()) {
        alternatives.push_back(element.get<std::string>());
      } else if (element.is_array() && !element.empty()) {
        for (const auto& alt : element) {
          if (!alt.is_string()) {
            return absl::InvalidArgumentError(
                StrCat(where, ": pattern alternatives must be strings"));
          }
          alternatives.push_back(alt.get<std::string>());
        }
      } else {
        return absl::InvalidArgumentError(
            StrCat(where, ": bad pattern element"));
      }
      for (auto& alt : alternatives) {
        if (alt.empty()) {
          return absl::InvalidArgumentError(
              StrCat(where, ": empty pattern alternative"));
        }
        if (alt.front() == '<' && !IsKnownMarker(alt)) {
          return absl::InvalidArgumentError(
              StrCat(where, ": unknown marker ", alt));
        }
        if (alt.front() != '<') alt = text::AsciiLower(alt);
      }
      rule.pattern.push_back(std::move(alternatives));
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

absl::StatusOr<std::vector<GrammarRule>> LoadGrammarRules(
    const std::string& path) {
  auto content = text::ReadFile(path);
  if (!content.ok()) return content.status();
  return ParseGrammarRules(*content);
}

std::vector<GrammarRule> BundledGrammarRules() {
  return {
      {"article-a-before-vowel", "article", {{"a"}, {"<vowel>"}}},
      {"article-an-before-consonant", "article", {{"an"}, {"<consonant>"}}},
      {"agreement-third-singular",
       "agreement",
       {{"he", "she", "it"}, {"are", "were", "have", "am"}}},
      {"agreement-plural",
       "agreement",
       {{"we", "they", "you"}, {"is", "was", "has", "am"}}},
      {"agreement-first-singular", "agreement", {{"i"}, {"is", "are", "has"}}},
      {"doubled-word", "doubled_word", {{"<word>"}, {"<same>"}}},
  };
}

std::vector<std::string> ErrorTypes(std::span<const GrammarRule> rules) {
  std::vector<std::string> types;
  for (const auto& rule : rules) {
    if (std::find(types.begin(), types.end(), rule.error_type) == types.end()) {
      types.push_back(rule.error_type);
    }
  }
  return types;
}

bool MarkerDepthProvider::IsSubordinationMarker(std::string_view token) {
  return Contains(kSubordinationMarkers, token);
}

int MarkerDepthProvider::Depth(std::string_view sentence) const {
  int depth = 1;
  for (const auto& token : text::TokenizeWords(sentence)) {
    if (IsSubordinationMarker(token)) ++depth;
  }
  return depth;
}

}  // namespace assesskit::features
