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

#include "assesskit/common/demographics.h"

#include <algorithm>

#include "assesskit/common/strings.h"

namespace assesskit {

absl::Status DemographicVocabulary::Validate(
    const DemographicRecord& record) const {
  if (std::find(genders.begin(), genders.end(), record.gender) ==
      genders.end()) {
    return absl::InvalidArgumentError(
        StrCat("unknown gender category '", record.gender, "'"));
  }
  if (std::find(l1s.begin(), l1s.end(), record.l1) == l1s.end()) {
    return absl::InvalidArgumentError(
        StrCat("unknown L1 category '", record.l1, "'"));
  }
  return absl::OkStatus();
}

}  // namespace assesskit
