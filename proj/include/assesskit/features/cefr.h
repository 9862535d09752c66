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

#ifndef ASSESSKIT_FEATURES_CEFR_H_
#define ASSESSKIT_FEATURES_CEFR_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace assesskit::features {

// A1 < A2 < B1 < B2 < C1 < C2.
enum class CefrLevel { kA1 = 0, kA2, kB1, kB2, kC1, kC2 };

inline constexpr std::array<std::string_view, 6> kCefrLabels = {
    "A1", "A2", "B1", "B2", "C1", "C2"};

std::string_view CefrLabel(CefrLevel level);
absl::StatusOr<CefrLevel> ParseCefrLevel(std::string_view label);

// Token -> CEFR level lookup.
class CefrWordlist {
 public:
  CefrWordlist() = default;
  explicit CefrWordlist(std::map<std::string, CefrLevel, std::less<>> levels)
      : levels_(std::move(levels)) {}

  // Tab-separated "token<TAB>level" lines; '#' starts a comment line.
  static absl::StatusOr<CefrWordlist> ParseTsv(std::string_view content);
  static absl::StatusOr<CefrWordlist> LoadTsv(const std::string& path);

  std::optional<CefrLevel> Lookup(std::string_view token) const;
  size_t size() const { return levels_.size(); }

 private:
  std::map<std::string, CefrLevel, std::less<>> levels_;
};

}  // namespace assesskit::features

#endif  // ASSESSKIT_FEATURES_CEFR_H_
