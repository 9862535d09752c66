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

#include "assesskit/itemgen/types.h"

#include <array>
#include <utility>

#include "assesskit/common/strings.h"

namespace assesskit::itemgen {
namespace {

constexpr std::array<std::string_view, 2> kCategoryNames = {"expository", "narrative"};
constexpr std::array<std::string_view, 5> kKindNames = {
    "vocabulary_in_context", "text_completion", "comprehension", "main_idea",
    "possible_title"};

nlohmann::json OptionJson(const ItemOption& o) {
  nlohmann::json j = {{"text", o.text}, {"correct", o.correct}};
  if (o.similarity) j["similarity"] = *o.similarity;
  if (o.log_prob) j["log_prob"] = *o.log_prob;
  return j;
}

absl::StatusOr<ItemOption> OptionFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string() ||
      !j.contains("correct") || !j["correct"].is_boolean()) {
    return absl::InvalidArgumentError("option needs string \"text\" and boolean \"correct\"");
  }
  ItemOption o;
  o.text = j["text"].get<std::string>();
  o.correct = j["correct"].get<bool>();
  if (j.contains("similarity")) o.similarity = j["similarity"].get<double>();
  if (j.contains("log_prob")) o.log_prob = j["log_prob"].get<double>();
  return o;
}

absl::Status CheckOptions(const std::vector<ItemOption>& options, std::string_view where) {
  int keyed = 0;
  for (const auto& o : options) keyed += o.correct ? 1 : 0;
  if (keyed != 1) {
    return absl::FailedPreconditionError(
        StrCat(where, " has ", keyed, " keyed options, expected exactly 1"));
  }
  return absl::OkStatus();
}

}  // namespace

std::string_view CategoryName(Category category) {
  return kCategoryNames[static_cast<size_t>(category)];
}

std::string_view ItemKindName(ItemKind kind) { return kKindNames[static_cast<size_t>(kind)]; }

absl::StatusOr<Category> ParseCategory(std::string_view name) {
  for (size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  return absl::InvalidArgumentError(
      StrCat("unknown category \"", name, "\" (expected expository or narrative)"));
}

absl::StatusOr<ItemKind> ParseItemKind(std::string_view name) {
  for (size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ItemKind>(i);
  }
  return absl::InvalidArgumentError(StrCat("unknown item kind \"", name, "\""));
}

absl::Status CheckKeyCount(const ItemDraft& draft) {
  if (draft.kind == ItemKind::kVocabularyInContext) {
    if (draft.blanks.empty()) return absl::FailedPreconditionError("cloze item has no blanks");
    for (size_t i = 0; i < draft.blanks.size(); ++i) {
      absl::Status s = CheckOptions(draft.blanks[i].options, StrCat("blank ", i));
      if (!s.ok()) return s;
    }
    return absl::OkStatus();
  }
  return CheckOptions(draft.options, "item");
}

nlohmann::json ToJson(const Passage& p) {
  return {{"passage_id", p.passage_id},
          {"text", p.text},
          {"category", CategoryName(p.category)},
          {"topic", p.topic},
          {"provenance",
           {{"provider_id", p.provenance.provider_id},
            {"prompt_id", p.provenance.prompt_id},
            {"seed", p.provenance.seed}}}};
}

nlohmann::json ToJson(const ItemDraft& d) {
  nlohmann::json j = {{"item_id", d.item_id},
                      {"passage_id", d.passage_id},
                      {"kind", ItemKindName(d.kind)},
                      {"stem", d.stem},
                      {"options", nlohmann::json::array()},
                      {"diagnostics", d.diagnostics}};
  for (const auto& o : d.options) j["options"].push_back(OptionJson(o));
  if (!d.blanks.empty()) {
    j["blanks"] = nlohmann::json::array();
    for (const auto& b : d.blanks) {
      nlohmann::json bj = {{"token_index", b.token_index},
                           {"begin", b.span.begin},
                           {"end", b.span.end},
                           {"options", nlohmann::json::array()}};
      for (const auto& o : b.options) bj["options"].push_back(OptionJson(o));
      j["blanks"].push_back(std::move(bj));
    }
  }
  if (d.answer_span) j["answer_span"] = {d.answer_span->begin, d.answer_span->end};
  return j;
}

absl::StatusOr<Passage> PassageFromJson(const nlohmann::json& j) {
  try {
    Passage p;
    p.passage_id = j.at("passage_id").get<std::string>();
    p.text = j.at("text").get<std::string>();
    auto category = ParseCategory(j.at("category").get<std::string>());
    if (!category.ok()) return category.status();
    p.category = *category;
    p.topic = j.at("topic").get<std::string>();
    const auto& prov = j.at("provenance");
    p.provenance = {prov.at("provider_id").get<std::string>(),
                    prov.at("prompt_id").get<std::string>(), prov.at("seed").get<uint64_t>()};
    return p;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(StrCat("malformed passage: ", e.what()));
  }
}

absl::StatusOr<ItemDraft> DraftFromJson(const nlohmann::json& j) {
  try {
    ItemDraft d;
    d.item_id = j.at("item_id").get<std::string>();
    d.passage_id = j.at("passage_id").get<std::string>();
    auto kind = ParseItemKind(j.at("kind").get<std::string>());
    if (!kind.ok()) return kind.status();
    d.kind = *kind;
    d.stem = j.at("stem").get<std::string>();
    for (const auto& oj : j.at("options")) {
      auto o = OptionFromJson(oj);
      if (!o.ok()) return o.status();
      d.options.push_back(*std::move(o));
    }
    if (j.contains("blanks")) {
      for (const auto& bj : j["blanks"]) {
        ClozeBlank b;
        b.token_index = bj.at("token_index").get<size_t>();
        b.span = {bj.at("begin").get<size_t>(), bj.at("end").get<size_t>()};
        for (const auto& oj : bj.at("options")) {
          auto o = OptionFromJson(oj);
          if (!o.ok()) return o.status();
          b.options.push_back(*std::move(o));
        }
        d.blanks.push_back(std::move(b));
      }
    }
    if (j.contains("answer_span")) {
      d.answer_span = text::CharSpan{j["answer_span"].at(0).get<size_t>(),
                                     j["answer_span"].at(1).get<size_t>()};
    }
    if (j.contains("diagnostics")) d.diagnostics = j["diagnostics"];
    return d;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(StrCat("malformed item draft: ", e.what()));
  }
}

}  // namespace assesskit::itemgen
