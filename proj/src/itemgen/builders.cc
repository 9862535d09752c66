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

#include "assesskit/itemgen/builders.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "absl/strings/cord.h"
#include "assesskit/common/random.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::itemgen {
namespace {

constexpr std::string_view kBlank = "_____";

absl::StatusOr<double> MeanLogProb(const LlmProvider& provider, std::string_view text) {
  ASSIGN_OR_RETURN(std::vector<double> lps, provider.TokenLogProbs(text));
  if (lps.empty()) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double v : lps) sum += v;
  return sum / static_cast<double>(lps.size());
}

std::vector<std::string> Lines(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view line : Split(text, '\n')) {
    line = Trim(line);
    if (!line.empty()) out.emplace_back(line);
  }
  return out;
}

std::string ItemId(const Passage& passage, ItemKind kind, size_t n = 0) {
  return n == 0 ? StrCat(passage.passage_id, "-", ItemKindName(kind))
                : StrCat(passage.passage_id, "-", ItemKindName(kind), "-", n);
}

}  // namespace

absl::StatusOr<Passage> GeneratePassage(const LlmProvider& provider,
                                        const GenerationPrompt& prompt,
                                        const PassageConstraints& c, uint64_t seed,
                                        std::string passage_id) {
  if (c.min_words <= 0 || c.max_words < c.min_words || c.max_attempts <= 0) {
    return absl::InvalidArgumentError("passage constraints need 0 < min_words <= max_words "
                                      "and at least one attempt");
  }
  TaskDirective task;
  task.kind = TaskDirective::Kind::kPassage;
  task.category = c.category;
  task.topic = prompt.target.topic;
  task.min_words = c.min_words;
  task.max_words = c.max_words;
  const std::string request = StrCat(prompt.rendered, "\n\n", RenderDirective(task));
  std::string last;
  size_t last_words = 0;
  for (int attempt = 0; attempt < c.max_attempts; ++attempt) {
    const uint64_t attempt_seed = attempt == 0 ? seed : Mix64(seed + attempt);
    ASSIGN_OR_RETURN(last, provider.Generate(request, attempt_seed, c.max_tokens));
    last_words = text::Tokenize(last).size();
    if (last_words >= static_cast<size_t>(c.min_words) &&
        last_words <= static_cast<size_t>(c.max_words)) {
      Passage p;
      p.passage_id = std::move(passage_id);
      p.text = std::move(last);
      p.category = c.category;
      p.topic = prompt.target.topic;
      p.provenance = {provider.id(), prompt.template_id, attempt_seed};
      return p;
    }
  }
  absl::Status status = absl::ResourceExhaustedError(
      StrCat("generation exhausted after ", c.max_attempts, " attempts; last candidate had ",
             last_words, " words, wanted ", c.min_words, "-", c.max_words));
  status.SetPayload(kLastCandidatePayload, absl::Cord(last));
  return status;
}

std::optional<std::string> LastCandidate(const absl::Status& status) {
  auto payload = status.GetPayload(kLastCandidatePayload);
  if (!payload) return std::nullopt;
  return std::string(*payload);
}

std::vector<double> Percentiles(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<double> out(n, 0.5);
  if (n < 2) return out;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < n; ++i) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), values[i]);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), values[i]);
    const double below = static_cast<double>(lo - sorted.begin());
    const double ties = static_cast<double>(hi - lo);
    out[i] = (below + (ties - 1.0) / 2.0) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<ClozeCandidate> ClozeCandidates(const std::vector<std::string>& tokens,
                                            const std::vector<double>& log_probs,
                                            const text::EmbeddingSpace* space,
                                            const std::vector<double>& passage_embedding,
                                            const ClozeParams& params) {
  const std::vector<double> pct = Percentiles(log_probs);
  const double mid = (params.band_low + params.band_high) / 2.0;
  const double half = (params.band_high - params.band_low) / 2.0;
  std::vector<ClozeCandidate> out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!text::IsContentWord(tokens[i])) continue;
    if (pct[i] < params.band_low || pct[i] > params.band_high) continue;
    ClozeCandidate c;
    c.index = i;
    c.log_prob = log_probs[i];
    c.percentile = pct[i];
    if (space != nullptr && !passage_embedding.empty()) {
      if (const auto* v = space->TermVector(tokens[i])) {
        c.semantic = text::Cosine(*v, passage_embedding);
      }
    }
    const double closeness = half > 0.0 ? 1.0 - std::abs(pct[i] - mid) / half : 1.0;
    c.score = params.likelihood_weight * closeness + params.semantic_weight * c.semantic;
    out.push_back(c);
  }
  return out;
}

std::vector<size_t> SelectBlanks(const std::vector<ClozeCandidate>& candidates, int count,
                                 int min_gap) {
  std::vector<const ClozeCandidate*> order;
  for (const auto& c : candidates) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const ClozeCandidate* a, const ClozeCandidate* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->index < b->index;
  });
  std::vector<size_t> chosen;
  for (const ClozeCandidate* c : order) {
    if (static_cast<int>(chosen.size()) >= count) break;
    bool fits = true;
    for (size_t j : chosen) {
      const size_t d = c->index > j ? c->index - j : j - c->index;
      if (d < static_cast<size_t>(std::max(min_gap, 1))) fits = false;
    }
    if (fits) chosen.push_back(c->index);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

absl::StatusOr<ItemDraft> BuildCloze(const Passage& passage, const text::NGramModel& lm,
                                     const text::EmbeddingSpace* space,
                                     const ClozeParams& params, uint64_t seed) {
  if (params.blanks <= 0 || params.distractors <= 0) {
    return absl::InvalidArgumentError("cloze needs at least one blank and one distractor");
  }
  const text::TokenSequence seq = text::Tokenize(passage.text);
  if (seq.size() < static_cast<size_t>(params.min_tokens)) {
    return absl::InvalidArgumentError(StrCat("passage too short for cloze: ", seq.size(),
                                             " tokens, need ", params.min_tokens));
  }
  ASSIGN_OR_RETURN(std::vector<double> lps, lm.TokenLogProbs(seq.tokens));
  const std::vector<double> embedding =
      space != nullptr ? space->Embed(passage.text) : std::vector<double>{};
  const std::vector<ClozeCandidate> candidates =
      ClozeCandidates(seq.tokens, lps, space, embedding, params);
  const std::vector<size_t> chosen = SelectBlanks(candidates, params.blanks, params.min_gap);

  ItemDraft draft;
  draft.item_id = ItemId(passage, ItemKind::kVocabularyInContext);
  draft.passage_id = passage.passage_id;
  draft.kind = ItemKind::kVocabularyInContext;
  nlohmann::json dropped = nlohmann::json::array();
  Rng rng(Mix64(seed ^ HashString(passage.passage_id)));
  for (size_t i : chosen) {
    const std::span<const std::string> context(seq.tokens.data(), i);
    const std::string& key = seq.tokens[i];
    ASSIGN_OR_RETURN(double key_lp, lm.ConditionalLogProb(context, key));
    std::vector<std::pair<double, std::string>> below;
    for (const std::string& v : lm.vocabulary()) {
      if (v == key || !text::IsContentWord(v)) continue;
      ASSIGN_OR_RETURN(double lp, lm.ConditionalLogProb(context, v));
      if (lp < key_lp) below.emplace_back(lp, v);
    }
    std::sort(below.begin(), below.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    if (below.size() < static_cast<size_t>(params.distractors)) {
      dropped.push_back(i);
      continue;
    }
    ClozeBlank blank;
    blank.token_index = i;
    blank.span = seq.spans[i];
    blank.options.push_back({key, true, std::nullopt, key_lp});
    for (int d = 0; d < params.distractors; ++d) {
      blank.options.push_back({below[d].second, false, std::nullopt, below[d].first});
    }
    rng.Shuffle(blank.options);
    draft.blanks.push_back(std::move(blank));
  }
  if (draft.blanks.empty()) {
    return absl::FailedPreconditionError("no eligible cloze positions in the passage");
  }
  std::string stem;
  size_t pos = 0;
  for (const auto& b : draft.blanks) {
    stem.append(passage.text, pos, b.span.begin - pos);
    stem += kBlank;
    pos = b.span.end;
  }
  stem.append(passage.text, pos);
  draft.stem = std::move(stem);
  draft.diagnostics = {{"requested_blanks", params.blanks},
                       {"placed_blanks", draft.blanks.size()},
                       {"eligible_positions", candidates.size()},
                       {"reduced", draft.blanks.size() < static_cast<size_t>(params.blanks)},
                       {"dropped_for_distractors", dropped}};
  return draft;
}

absl::StatusOr<size_t> MostPredictableSentence(std::string_view passage_text,
                                               const text::NGramModel& lm) {
  const std::vector<text::CharSpan> sentences = text::SplitSentences(passage_text);
  if (sentences.size() < 3) {
    return absl::InvalidArgumentError(
        StrCat("text completion needs at least 3 sentences, got ", sentences.size()));
  }
  const text::TokenSequence seq = text::Tokenize(passage_text);
  ASSIGN_OR_RETURN(std::vector<double> lps, lm.TokenLogProbs(seq.tokens));
  size_t best = sentences.size();
  double best_mean = -std::numeric_limits<double>::infinity();
  size_t t = 0;
  for (size_t s = 0; s < sentences.size(); ++s) {
    double sum = 0.0;
    int n = 0;
    while (t < seq.size() && seq.spans[t].begin < sentences[s].end) {
      if (seq.spans[t].begin >= sentences[s].begin) {
        sum += lps[t];
        ++n;
      }
      ++t;
    }
    if (n == 0) continue;
    const double mean = sum / n;
    if (best == sentences.size() || mean > best_mean) {
      best = s;
      best_mean = mean;
    }
  }
  if (best == sentences.size()) return absl::InvalidArgumentError("passage has no tokens");
  return best;
}

absl::StatusOr<ItemDraft> BuildTextCompletion(const Passage& passage,
                                              const text::NGramModel& lm,
                                              const LlmProvider& provider,
                                              const text::EmbeddingSpace& space,
                                              const TextCompletionParams& params,
                                              uint64_t seed) {
  ASSIGN_OR_RETURN(size_t target, MostPredictableSentence(passage.text, lm));
  const text::CharSpan span = text::SplitSentences(passage.text)[target];
  const std::string key(Trim(std::string_view(passage.text).substr(span.begin, span.length())));
  const size_t key_begin = passage.text.find(key, span.begin);

  TaskDirective task;
  task.kind = TaskDirective::Kind::kSentences;
  task.count = params.alternatives;
  ASSIGN_OR_RETURN(std::string raw,
                   provider.Generate(PassagePrompt("Write sentences on related subjects that "
                                                   "do not appear in this passage.",
                                                   passage.text, task),
                                     seed, 64 * params.alternatives));
  const std::vector<double> key_embedding = space.Embed(key);
  struct Candidate {
    double similarity;
    std::string text;
  };
  std::vector<Candidate> kept;
  std::set<std::string> seen = {text::AsciiLower(key)};
  nlohmann::json excluded = nlohmann::json::array();
  for (std::string& line : Lines(raw)) {
    if (passage.text.find(line) != std::string::npos ||
        !seen.insert(text::AsciiLower(line)).second) {
      excluded.push_back({{"text", line}, {"reason", "in-passage-or-duplicate"}});
      continue;
    }
    const double sim = text::Cosine(space.Embed(line), key_embedding);
    if (sim < params.similarity_floor || sim > params.similarity_ceiling) {
      excluded.push_back({{"text", line}, {"reason", "outside-similarity-band"},
                          {"similarity", sim}});
      continue;
    }
    kept.push_back({sim, std::move(line)});
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.text < b.text;
  });
  if (kept.size() < 3) {
    return absl::FailedPreconditionError(
        StrCat("only ", kept.size(), " alternative sentences inside the similarity band"));
  }
  ItemDraft draft;
  draft.item_id = ItemId(passage, ItemKind::kTextCompletion);
  draft.passage_id = passage.passage_id;
  draft.kind = ItemKind::kTextCompletion;
  draft.stem = passage.text.substr(0, key_begin) + std::string(kBlank) +
               passage.text.substr(key_begin + key.size());
  ASSIGN_OR_RETURN(double key_lp, MeanLogProb(provider, key));
  draft.options.push_back({key, true, 1.0, key_lp});
  for (size_t i = 0; i < 3; ++i) {
    ASSIGN_OR_RETURN(double lp, MeanLogProb(provider, kept[i].text));
    draft.options.push_back({kept[i].text, false, kept[i].similarity, lp});
  }
  Rng rng(Mix64(seed ^ HashString(draft.item_id)));
  rng.Shuffle(draft.options);
  draft.diagnostics = {{"target_sentence", target}, {"excluded", excluded}};
  return draft;
}

absl::StatusOr<std::vector<ItemDraft>> BuildChoiceItems(const Passage& passage,
                                                        const std::vector<Passage>& alternatives,
                                                        const LlmProvider& provider,
                                                        const text::EmbeddingSpace& space,
                                                        const ChoiceParams& params,
                                                        uint64_t seed) {
  if (alternatives.size() < 3) {
    return absl::InvalidArgumentError(
        StrCat("choice items need at least 3 alternative passages, got ", alternatives.size()));
  }
  const std::vector<double> passage_embedding = space.Embed(passage.text);
  std::vector<double> similarity;
  for (const auto& alt : alternatives) {
    similarity.push_back(text::Cosine(space.Embed(alt.text), passage_embedding));
  }
  std::vector<ItemDraft> out;
  for (ItemKind kind : {ItemKind::kMainIdea, ItemKind::kPossibleTitle}) {
    TaskDirective task;
    task.kind = kind == ItemKind::kMainIdea ? TaskDirective::Kind::kMainIdea
                                            : TaskDirective::Kind::kTitle;
    const std::string_view instruction = kind == ItemKind::kMainIdea
                                             ? "State the main idea of this passage."
                                             : "Give this passage a short title.";
    ASSIGN_OR_RETURN(std::string key_raw,
                     provider.Generate(PassagePrompt(instruction, passage.text, task), seed, 64));
    const std::string key(Trim(key_raw));
    struct Candidate {
      double similarity;
      double log_prob;
      std::string text;
      std::string source;
    };
    std::vector<Candidate> kept;
    std::set<std::string> seen = {text::AsciiLower(key)};
    nlohmann::json excluded = nlohmann::json::array();
    for (size_t a = 0; a < alternatives.size(); ++a) {
      const Passage& alt = alternatives[a];
      if (similarity[a] < params.band_low || similarity[a] > params.band_high) {
        excluded.push_back({{"passage_id", alt.passage_id}, {"reason", "outside-similarity-band"},
                            {"similarity", similarity[a]}});
        continue;
      }
      ASSIGN_OR_RETURN(std::string raw,
                       provider.Generate(PassagePrompt(instruction, alt.text, task), seed, 64));
      std::string text(Trim(raw));
      if (text.empty() || !seen.insert(text::AsciiLower(text)).second) {
        excluded.push_back({{"passage_id", alt.passage_id}, {"reason", "duplicate"}});
        continue;
      }
      ASSIGN_OR_RETURN(double lp, MeanLogProb(provider, text));
      kept.push_back({similarity[a], lp, std::move(text), alt.passage_id});
    }
    std::sort(kept.begin(), kept.end(), [](const Candidate& x, const Candidate& y) {
      if (x.similarity != y.similarity) return x.similarity > y.similarity;
      if (x.log_prob != y.log_prob) return x.log_prob > y.log_prob;
      return x.text < y.text;
    });
    if (kept.size() < 3) {
      return absl::FailedPreconditionError(
          StrCat("only ", kept.size(), " distinct ", ItemKindName(kind),
                 " distractors inside the similarity band"));
    }
    ItemDraft draft;
    draft.item_id = ItemId(passage, kind);
    draft.passage_id = passage.passage_id;
    draft.kind = kind;
    draft.stem = kind == ItemKind::kMainIdea ? "What is the main idea of the passage?"
                                             : "Which is the best title for the passage?";
    ASSIGN_OR_RETURN(double key_lp, MeanLogProb(provider, key));
    draft.options.push_back({key, true, 1.0, key_lp});
    nlohmann::json ranking = nlohmann::json::array();
    for (size_t i = 0; i < kept.size(); ++i) {
      ranking.push_back({{"passage_id", kept[i].source},
                         {"similarity", kept[i].similarity},
                         {"log_prob", kept[i].log_prob}});
      if (i < 3) {
        draft.options.push_back({kept[i].text, false, kept[i].similarity, kept[i].log_prob});
      }
    }
    Rng rng(Mix64(seed ^ HashString(draft.item_id)));
    rng.Shuffle(draft.options);
    draft.diagnostics = {{"ranking", ranking}, {"excluded", excluded}};
    out.push_back(std::move(draft));
  }
  return out;
}

absl::StatusOr<ComprehensionResult> BuildComprehension(const LlmProvider& provider,
                                                       const Passage& passage,
                                                       const FilterThresholds& thresholds,
                                                       const text::EmbeddingSpace* space,
                                                       int candidates, uint64_t seed) {
  TaskDirective task;
  task.kind = TaskDirective::Kind::kQuestions;
  task.count = candidates;
  ASSIGN_OR_RETURN(
      std::string raw,
      provider.Generate(PassagePrompt("Write comprehension questions. Each answer must be "
                                      "an exact phrase copied from the passage.",
                                      passage.text, task),
                        seed, 64 * std::max(candidates, 1)));
  ComprehensionResult result;
  size_t n = 0;
  for (const std::string& line : Lines(raw)) {
    ItemDraft draft;
    draft.item_id = ItemId(passage, ItemKind::kComprehension, ++n);
    draft.passage_id = passage.passage_id;
    draft.kind = ItemKind::kComprehension;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("question") ||
        !j.contains("answer") || !j["question"].is_string() || !j["answer"].is_string()) {
      draft.stem = line;
      result.rejected.emplace_back(std::move(draft), "malformed-candidate");
      continue;
    }
    draft.stem = j["question"].get<std::string>();
    const std::string answer = j["answer"].get<std::string>();
    draft.options.push_back({answer, true, std::nullopt, std::nullopt});
    const size_t at = answer.empty() ? std::string::npos : passage.text.find(answer);
    if (at != std::string::npos) draft.answer_span = text::CharSpan{at, at + answer.size()};
    FilterDecision decision = FilterItem(draft, passage.text, thresholds, space);
    if (decision.accepted) {
      result.accepted.push_back(std::move(draft));
    } else {
      result.rejected.emplace_back(std::move(draft), std::move(decision.reason));
    }
  }
  if (result.accepted.empty()) {
    return absl::FailedPreconditionError(
        StrCat("no viable items: ", result.rejected.size(), " candidates, none accepted"));
  }
  return result;
}

}  // namespace assesskit::itemgen
