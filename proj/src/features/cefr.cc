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

#include "assesskit/features/cefr.h"

#include "absl/status/status.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/corpus.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::features {

std::string_view CefrLabel(CefrLevel level) {
  return kCefrLabels[static_cast<int>(level)];
}

absl::StatusOr<CefrLevel> ParseCefrLevel(std::string_view label) {
  for (size_t i = 0; i < kCefrLabels.size(); ++i) {
    if (kCefrLabels[i] == label) return static_cast<CefrLevel>(i);
  }
  return absl::InvalidArgumentError(
      StrCat("unknown CEFR level '", label, "'"));
}

absl::StatusOr<CefrWordlist> CefrWordlist::ParseTsv(std::string_view content) {
  std::map<std::string, CefrLevel, std::less<>> levels;
  int line_number = 0;
  for (std::string_view line : Split(content, '\n')) {
    ++line_number;
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string_view> fields = Split(line, '\t');
    if (fields.size() != 2) {
      return absl::InvalidArgumentError(StrCat(
          "wordlist line ", line_number, ": expected token<TAB>level"));
    }
    auto level = ParseCefrLevel(Trim(fields[1]));
    if (!level.ok()) {
      return absl::InvalidArgumentError(StrCat(
          "wordlist line ", line_number, ": ", level.status().message()));
    }
    levels[text::AsciiLower(Trim(fields[0]))] = *level;
  }
  return CefrWordlist(std::move(levels));
}

absl::StatusOr<CefrWordlist> CefrWordlist::LoadTsv(const std::string& path) {
  auto content = text::ReadFile(path);
  if (!content.ok()) return content.status();
  return ParseTsv(*content);
}

std::optional<CefrLevel> CefrWordlist::Lookup(std::string_view token) const {
  const auto it = levels_.find(token);
  if (it == levels_.end()) return std::nullopt;
  return it->second;
}

}  // namespace assesskit::features
