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

#ifndef ASSESSKIT_TEXT_CORPUS_H_
#define ASSESSKIT_TEXT_CORPUS_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace assesskit::text {

struct CorpusDocument {
  std::string id;
  std::string text;
};

// Parses corpus content. JSON-lines input ({"id","text"} per line) is
// detected from the first non-blank character; otherwise every non-blank
// line is one document with id "line-<n>".
absl::StatusOr<std::vector<CorpusDocument>> ParseCorpus(
    std::string_view content);

absl::StatusOr<std::vector<CorpusDocument>> LoadCorpus(const std::string& path);

std::vector<std::string> DocumentTexts(
    const std::vector<CorpusDocument>& documents);

absl::StatusOr<std::string> ReadFile(const std::string& path);

}  // namespace assesskit::text

#endif  // ASSESSKIT_TEXT_CORPUS_H_
