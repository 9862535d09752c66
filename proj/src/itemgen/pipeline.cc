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

#include "assesskit/itemgen/pipeline.h"

#include <utility>

#include "assesskit/common/random.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"

namespace assesskit::itemgen {
namespace {

std::string StatusText(const absl::Status& s) { return std::string(s.message()); }

}  // namespace

void BuildItemsForPassage(const BatchConfig& config, const Passage& passage,
                          const std::vector<Passage>& alternatives, uint64_t seed,
                          const LlmProvider& provider, const text::NGramModel& lm,
                          const text::EmbeddingSpace& space, BatchResult& result) {
  auto admit = [&](ItemDraft draft) {
    FilterDecision d = FilterItem(draft, passage.text, config.filter, &space);
    if (d.accepted) {
      result.accepted.push_back(std::move(draft));
    } else {
      result.rejected.push_back({passage.passage_id, draft.item_id, draft.kind, d.reason});
    }
  };
  auto cloze = BuildCloze(passage, lm, &space, config.cloze, seed);
  if (cloze.ok()) {
    admit(*std::move(cloze));
  } else {
    result.failures.push_back({passage.passage_id, "vocabulary_in_context",
                               StatusText(cloze.status())});
  }
  auto completion = BuildTextCompletion(passage, lm, provider, space, config.completion, seed);
  if (completion.ok()) {
    admit(*std::move(completion));
  } else {
    result.failures.push_back({passage.passage_id, "text_completion",
                               StatusText(completion.status())});
  }
  auto choice = BuildChoiceItems(passage, alternatives, provider, space, config.choice, seed);
  if (choice.ok()) {
    for (auto& draft : *choice) admit(std::move(draft));
  } else {
    result.failures.push_back({passage.passage_id, "choice", StatusText(choice.status())});
  }
  auto comprehension = BuildComprehension(provider, passage, config.filter, &space,
                                          config.comprehension_candidates, seed);
  if (comprehension.ok()) {
    for (auto& draft : comprehension->accepted) result.accepted.push_back(std::move(draft));
    for (auto& [draft, reason] : comprehension->rejected) {
      result.rejected.push_back({passage.passage_id, draft.item_id, draft.kind, reason});
    }
  } else {
    result.failures.push_back({passage.passage_id, "comprehension",
                               StatusText(comprehension.status())});
  }
}

absl::StatusOr<BatchResult> RunBatch(const BatchConfig& config, const PromptTemplate& tmpl,
                                     const std::vector<Exemplar>& exemplars,
                                     const LlmProvider& provider, const text::NGramModel& lm,
                                     const text::EmbeddingSpace& space) {
  BatchResult result;
  std::vector<uint64_t> seeds;
  for (size_t i = 0; i < config.targets.size(); ++i) {
    const Target& target = config.targets[i];
    ASSIGN_OR_RETURN(GenerationPrompt prompt, AssemblePrompt(tmpl, exemplars, target));
    PassageConstraints constraints = config.constraints;
    constraints.category = target.category;
    const uint64_t seed = Mix64(config.seed ^ Mix64(i + 1));
    const std::string id = StrCat(config.id_prefix, "-", i + 1);
    auto passage = GeneratePassage(provider, prompt, constraints, seed, id);
    if (!passage.ok()) {
      result.failures.push_back({id, "passage", StatusText(passage.status())});
      continue;
    }
    result.passages.push_back(*std::move(passage));
    seeds.push_back(seed);
  }

  for (size_t p = 0; p < result.passages.size(); ++p) {
    std::vector<Passage> alternatives;
    for (size_t q = 0; q < result.passages.size(); ++q) {
      if (q != p) alternatives.push_back(result.passages[q]);
    }
    BuildItemsForPassage(config, result.passages[p], alternatives, seeds[p], provider, lm,
                         space, result);
  }
  return result;
}

nlohmann::json ToJson(const BatchResult& r) {
  nlohmann::json j = {{"passages", nlohmann::json::array()},
                      {"accepted", nlohmann::json::array()},
                      {"rejected", nlohmann::json::array()},
                      {"failures", nlohmann::json::array()}};
  for (const auto& p : r.passages) j["passages"].push_back(ToJson(p));
  for (const auto& d : r.accepted) j["accepted"].push_back(ToJson(d));
  for (const auto& x : r.rejected) {
    j["rejected"].push_back({{"passage_id", x.passage_id},
                             {"item_id", x.item_id},
                             {"kind", ItemKindName(x.kind)},
                             {"reason", x.reason}});
  }
  for (const auto& f : r.failures) {
    j["failures"].push_back(
        {{"passage_id", f.passage_id}, {"stage", f.stage}, {"message", f.message}});
  }
  return j;
}

}  // namespace assesskit::itemgen
