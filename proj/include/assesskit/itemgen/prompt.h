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

#ifndef ASSESSKIT_ITEMGEN_PROMPT_H_
#define ASSESSKIT_ITEMGEN_PROMPT_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/itemgen/types.h"

namespace assesskit::itemgen {

// Plain text with {{category}}, {{topic}} and {{exemplars}} placeholders.
// All three must appear; any other {{name}} is an error.
struct PromptTemplate {
  std::string template_id;
  std::string body;
};

absl::StatusOr<PromptTemplate> ParseTemplate(std::string template_id, std::string body);
// The template id is the file name without its extension.
absl::StatusOr<PromptTemplate> LoadTemplate(const std::string& path);

// Exemplars are rendered in the order given, each verbatim. At least one
// exemplar must share the target category.
absl::StatusOr<GenerationPrompt> AssemblePrompt(const PromptTemplate& tmpl,
                                                const std::vector<Exemplar>& exemplars,
                                                const Target& target);

// Exemplars from a passages JSONL file ({"category", "text", ...} per line).
absl::StatusOr<std::vector<Exemplar>> LoadExemplars(const std::string& path);

}  // namespace assesskit::itemgen

#endif  // ASSESSKIT_ITEMGEN_PROMPT_H_
