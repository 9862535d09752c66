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

#include "assesskit/features/extractors.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "absl/status/status.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::features {
namespace {

constexpr std::array<std::string_view, 15> kAnaphoricPronouns = {
    "he",   "him",  "his",   "she",    "her",   "hers",  "it",    "its",
    "they", "them", "their", "theirs", "this",  "these", "those"};

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;
};

std::vector<Sentence> SplitForFeatures(std::string_view response_text) {
  std::vector<Sentence> out;
  for (const auto& span : text::SplitSentences(
           response_text, {.require_uppercase = false})) {
    Sentence s;
    s.text = std::string(response_text.substr(span.begin, span.length()));
    s.tokens = text::TokenizeWords(s.text);
    if (!s.tokens.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::set<std::string> ContentWords(const std::vector<std::string>& tokens) {
  std::set<std::string> out;
  for (const auto& t : tokens) {
    if (text::IsContentWord(t)) out.insert(t);
  }
  return out;
}

double Jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  size_t shared = 0;
  for (const auto& t : a) shared += b.count(t);
  return static_cast<double>(shared) /
         static_cast<double>(a.size() + b.size() - shared);
}

std::map<std::string, double> WeightedCounts(std::string_view text,
                                             const text::IdfTable& idf) {
  std::map<std::string, double> out;
  for (const auto& t : text::TokenizeWords(text)) out[t] += 1.0;
  for (auto& [t, v] : out) v *= idf.Weight(t);
  return out;
}

}  // namespace

FeatureVector ContentFeatures(std::string_view prompt_text,
                              std::string_view response_text,
                              const text::IdfTable& idf) {
  const auto p = WeightedCounts(prompt_text, idf);
  const auto r = WeightedCounts(response_text, idf);
  double dot = 0.0, np = 0.0, nr = 0.0;
  for (const auto& [t, v] : p) {
    np += v * v;
    if (const auto it = r.find(t); it != r.end()) dot += v * it->second;
  }
  for (const auto& [t, v] : r) nr += v * v;
  const double sim =
      (np == 0.0 || nr == 0.0)
          ? 0.0
          : std::clamp(dot / (std::sqrt(np) * std::sqrt(nr)), 0.0, 1.0);
  FeatureVector fv;
  fv.Add("content_idf_similarity", sim, Subconstruct::kContent);
  return fv;
}

FeatureVector CoherenceFeatures(std::string_view response_text,
                                const text::EmbeddingSpace& space) {
  const auto sentences = SplitForFeatures(response_text);
  double overlap = 0.0, coreference = 0.0, lsa_mean = 0.0, lsa_min = 0.0;
  if (sentences.size() >= 2) {
    std::vector<std::set<std::string>> content;
    std::vector<std::vector<double>> embeddings;
    for (const auto& s : sentences) {
      content.push_back(ContentWords(s.tokens));
      embeddings.push_back(space.EmbedTokens(s.tokens));
    }
    lsa_min = 1.0;
    const size_t pairs = sentences.size() - 1;
    for (size_t i = 1; i < sentences.size(); ++i) {
      overlap += Jaccard(content[i - 1], content[i]);
      const double cos = text::Cosine(embeddings[i - 1], embeddings[i]);
      lsa_mean += cos;
      lsa_min = std::min(lsa_min, cos);
      for (const auto& t : sentences[i].tokens) {
        if (std::find(kAnaphoricPronouns.begin(), kAnaphoricPronouns.end(),
                      t) != kAnaphoricPronouns.end()) {
          coreference += 1.0;
        }
      }
      for (const auto& t : content[i]) coreference += content[i - 1].count(t);
    }
    overlap /= static_cast<double>(pairs);
    lsa_mean /= static_cast<double>(pairs);
  }
  FeatureVector fv;
  fv.Add("coherence_sentence_overlap", overlap, Subconstruct::kCoherence);
  fv.Add("coherence_coreference_count", coreference, Subconstruct::kCoherence);
  fv.Add("coherence_lsa_mean", lsa_mean, Subconstruct::kCoherence);
  fv.Add("coherence_lsa_min", lsa_min, Subconstruct::kCoherence);
  return fv;
}

absl::StatusOr<FeatureVector> LexisFeatures(std::string_view response_text,
                                            const CefrWordlist& wordlist,
                                            const DwuModels& dwu) {
  if (dwu.low == nullptr || dwu.high == nullptr) {
    return absl::FailedPreconditionError("DWU models are not loaded");
  }
  const auto tokens = text::TokenizeWords(response_text);
  std::array<double, 7> counts{};
  for (const auto& t : tokens) {
    const auto level = wordlist.Lookup(t);
    ++counts[level.has_value() ? static_cast<int>(*level) : 6];
  }
  double dwu_score = 0.0;
  if (!tokens.empty()) {
    for (double& c : counts) c /= static_cast<double>(tokens.size());
    auto high = dwu.high->TokenLogProbs(tokens);
    if (!high.ok()) return high.status();
    auto low = dwu.low->TokenLogProbs(tokens);
    if (!low.ok()) return low.status();
    for (size_t i = 0; i < tokens.size(); ++i) {
      dwu_score += (*high)[i] - (*low)[i];
    }
    dwu_score /= static_cast<double>(tokens.size());
  }
  FeatureVector fv;
  for (size_t i = 0; i < kCefrLabels.size(); ++i) {
    fv.Add(StrCat("lexis_cefr_", text::AsciiLower(kCefrLabels[i])),
           counts[i], Subconstruct::kLexis);
  }
  fv.Add("lexis_cefr_unlisted", counts[6], Subconstruct::kLexis);
  fv.Add("lexis_dwu", dwu_score, Subconstruct::kLexis);
  return fv;
}

FeatureVector GrammarFeatures(std::string_view response_text,
                              const DepthProvider& depth_provider,
                              std::span<const GrammarRule> rules) {
  const auto sentences = SplitForFeatures(response_text);
  const auto types = ErrorTypes(rules);
  double depth_sum = 0.0, depth_max = 0.0;
  size_t token_count = 0;
  std::vector<double> matches(types.size(), 0.0);
  for (const auto& s : sentences) {
    const double depth = depth_provider.Depth(s.text);
    depth_sum += depth;
    depth_max = std::max(depth_max, depth);
    token_count += s.tokens.size();
    for (size_t t = 0; t < types.size(); ++t) {
      for (size_t pos = 0; pos < s.tokens.size(); ++pos) {
        const bool hit = std::any_of(
            rules.begin(), rules.end(), [&](const GrammarRule& rule) {
              return rule.error_type == types[t] && rule.MatchesAt(s.tokens, pos);
            });
        if (hit) matches[t] += 1.0;
      }
    }
  }
  FeatureVector fv;
  fv.Add("grammar_depth_mean",
         sentences.empty() ? 0.0 : depth_sum / sentences.size(),
         Subconstruct::kGrammar);
  fv.Add("grammar_depth_max", depth_max, Subconstruct::kGrammar);
  for (size_t t = 0; t < types.size(); ++t) {
    fv.Add(StrCat("grammar_error_rate_", types[t]),
           token_count == 0 ? 0.0 : matches[t] / token_count,
           Subconstruct::kGrammar);
  }
  return fv;
}

std::vector<std::pair<std::string, Subconstruct>> FeatureSchema(
    std::span<const GrammarRule> rules) {
  std::vector<std::pair<std::string, Subconstruct>> schema = {
      {"content_idf_similarity", Subconstruct::kContent},
      {"coherence_sentence_overlap", Subconstruct::kCoherence},
      {"coherence_coreference_count", Subconstruct::kCoherence},
      {"coherence_lsa_mean", Subconstruct::kCoherence},
      {"coherence_lsa_min", Subconstruct::kCoherence}};
  for (const auto& label : kCefrLabels) {
    schema.emplace_back(StrCat("lexis_cefr_", text::AsciiLower(label)),
                        Subconstruct::kLexis);
  }
  schema.emplace_back("lexis_cefr_unlisted", Subconstruct::kLexis);
  schema.emplace_back("lexis_dwu", Subconstruct::kLexis);
  schema.emplace_back("grammar_depth_mean", Subconstruct::kGrammar);
  schema.emplace_back("grammar_depth_max", Subconstruct::kGrammar);
  for (const auto& type : ErrorTypes(rules)) {
    schema.emplace_back(StrCat("grammar_error_rate_", type),
                        Subconstruct::kGrammar);
  }
  return schema;
}

absl::StatusOr<FeatureVector> ExtractAll(std::string_view prompt_text,
                                         std::string_view response_text,
                                         const FeatureResources& resources) {
  if (resources.idf == nullptr || resources.space == nullptr ||
      resources.wordlist == nullptr || resources.depth_provider == nullptr) {
    return absl::FailedPreconditionError("feature resources are not loaded");
  }
  if (FeatureSchema(resources.rules).size() > kMaxFeatures) {
    return absl::InvalidArgumentError(StrCat(
        "grammar rule set yields more than ", kMaxFeatures, " features"));
  }
  FeatureVector fv = ContentFeatures(prompt_text, response_text, *resources.idf);
  fv.Append(CoherenceFeatures(response_text, *resources.space));
  auto lexis = LexisFeatures(response_text, *resources.wordlist, resources.dwu);
  if (!lexis.ok()) return lexis.status();
  fv.Append(*lexis);
  fv.Append(GrammarFeatures(response_text, *resources.depth_provider,
                            resources.rules));
  for (const auto& f : fv.features()) {
    if (!std::isfinite(f.value)) {
      return absl::InternalError(
          StrCat("feature ", f.name, " is not finite"));
    }
  }
  return fv;
}

}  // namespace assesskit::features
