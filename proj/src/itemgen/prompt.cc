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

#include "assesskit/itemgen/prompt.h"

#include <filesystem>
#include <set>
#include <utility>

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/corpus.h"

namespace assesskit::itemgen {
namespace {

constexpr std::string_view kOpen = "{{";
constexpr std::string_view kClose = "}}";

// Calls fn(literal) and fn_placeholder(name) in document order.
template <typename Literal, typename Placeholder>
absl::Status Walk(std::string_view body, Literal literal, Placeholder placeholder) {
  size_t pos = 0;
  while (pos < body.size()) {
    const size_t open = body.find(kOpen, pos);
    if (open == std::string_view::npos) {
      literal(body.substr(pos));
      break;
    }
    const size_t close = body.find(kClose, open + kOpen.size());
    if (close == std::string_view::npos) {
      return absl::InvalidArgumentError(StrCat("unterminated placeholder at offset ", open));
    }
    literal(body.substr(pos, open - pos));
    RETURN_IF_ERROR(placeholder(Trim(body.substr(open + kOpen.size(),
                                                 close - open - kOpen.size()))));
    pos = close + kClose.size();
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PromptTemplate> ParseTemplate(std::string template_id, std::string body) {
  std::set<std::string, std::less<>> seen;
  RETURN_IF_ERROR(Walk(
      body, [](std::string_view) {},
      [&](std::string_view name) -> absl::Status {
        if (name != "category" && name != "topic" && name != "exemplars") {
          return absl::InvalidArgumentError(
              StrCat("template ", template_id, ": unknown placeholder {{", name, "}}"));
        }
        seen.emplace(name);
        return absl::OkStatus();
      }));
  for (std::string_view required : {"category", "topic", "exemplars"}) {
    if (!seen.contains(required)) {
      return absl::InvalidArgumentError(
          StrCat("template ", template_id, " lacks the {{", required, "}} placeholder"));
    }
  }
  return PromptTemplate{std::move(template_id), std::move(body)};
}

absl::StatusOr<PromptTemplate> LoadTemplate(const std::string& path) {
  ASSIGN_OR_RETURN(std::string body, text::ReadFile(path));
  return ParseTemplate(std::filesystem::path(path).stem().string(), std::move(body));
}

absl::StatusOr<GenerationPrompt> AssemblePrompt(const PromptTemplate& tmpl,
                                                const std::vector<Exemplar>& exemplars,
                                                const Target& target) {
  bool has_category = false;
  for (const auto& e : exemplars) has_category |= e.category == target.category;
  if (!has_category) {
    return absl::FailedPreconditionError(
        StrCat("no exemplar for category ", CategoryName(target.category)));
  }
  std::string rendered_exemplars;
  for (size_t i = 0; i < exemplars.size(); ++i) {
    if (i > 0) rendered_exemplars += "\n\n";
    rendered_exemplars += StrCat("Example ", i + 1, " (", CategoryName(exemplars[i].category),
                                 "):\n", exemplars[i].text);
  }
  GenerationPrompt prompt;
  prompt.template_id = tmpl.template_id;
  prompt.exemplars = exemplars;
  prompt.target = target;
  RETURN_IF_ERROR(Walk(
      tmpl.body, [&](std::string_view s) { prompt.rendered += s; },
      [&](std::string_view name) {
        if (name == "category") {
          prompt.rendered += CategoryName(target.category);
        } else if (name == "topic") {
          prompt.rendered += target.topic;
        } else {
          prompt.rendered += rendered_exemplars;
        }
        return absl::OkStatus();
      }));
  return prompt;
}

absl::StatusOr<std::vector<Exemplar>> LoadExemplars(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, text::ReadFile(path));
  std::vector<Exemplar> out;
  size_t line_number = 0;
  for (std::string_view line : Split(content, '\n')) {
    ++line_number;
    line = Trim(line);
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("category") ||
        !j.contains("text") || !j["text"].is_string() || !j["category"].is_string()) {
      return absl::InvalidArgumentError(
          StrCat(path, " line ", line_number, ": expected {\"category\", \"text\"}"));
    }
    ASSIGN_OR_RETURN(Category category, ParseCategory(j["category"].get<std::string>()));
    out.push_back({category, j["text"].get<std::string>()});
  }
  return out;
}

}  // namespace assesskit::itemgen
