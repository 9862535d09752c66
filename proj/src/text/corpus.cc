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

#include "assesskit/text/corpus.h"

#include <cctype>
#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "assesskit/common/strings.h"
#include "json.hpp"

namespace assesskit::text {
absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::StatusOr<std::vector<CorpusDocument>> ParseCorpus(
    std::string_view content) {
  std::vector<CorpusDocument> docs;
  const std::string_view trimmed = Trim(content);
  const bool jsonl = !trimmed.empty() && trimmed.front() == '{';
  size_t line_number = 0;
  size_t pos = 0;
  while (pos <= content.size()) {
    size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = Trim(content.substr(pos, end - pos));
    ++line_number;
    pos = end + 1;
    if (line.empty()) continue;
    if (!jsonl) {
      docs.push_back({StrCat("line-", line_number), std::string(line)});
      continue;
    }
    const auto json = nlohmann::json::parse(line, nullptr, false);
    if (json.is_discarded() || !json.is_object() || !json.contains("text") ||
        !json["text"].is_string()) {
      return absl::InvalidArgumentError(
          StrCat("corpus line ", line_number,
                       ": expected an object with a string \"text\" field"));
    }
    CorpusDocument doc;
    doc.text = json["text"].get<std::string>();
    if (json.contains("id") && json["id"].is_string()) {
      doc.id = json["id"].get<std::string>();
    } else {
      doc.id = StrCat("line-", line_number);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

absl::StatusOr<std::vector<CorpusDocument>> LoadCorpus(const std::string& path) {
  auto content = ReadFile(path);
  if (!content.ok()) return content.status();
  return ParseCorpus(*content);
}

std::vector<std::string> DocumentTexts(
    const std::vector<CorpusDocument>& documents) {
  std::vector<std::string> texts;
  texts.reserve(documents.size());
  for (const auto& doc : documents) texts.push_back(doc.text);
  return texts;
}

}  // namespace assesskit::text
