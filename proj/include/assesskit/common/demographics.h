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

#ifndef ASSESSKIT_COMMON_DEMOGRAPHICS_H_
#define ASSESSKIT_COMMON_DEMOGRAPHICS_H_

#include <string>
#include <vector>

#include "absl/status/status.h"

namespace assesskit {

// Self-reported background of a test taker.
struct DemographicRecord {
  std::string gender;
  std::string l1;

  bool operator==(const DemographicRecord&) const = default;
};

// Closed category sets; values outside them are rejected at ingestion.
struct DemographicVocabulary {
  std::vector<std::string> genders = {"female", "male"};
  std::vector<std::string> l1s = {"Arabic",  "Mandarin Chinese", "Telugu",
                                  "English", "Spanish",          "Gujarati",
                                  "Bengali", "other"};

  absl::Status Validate(const DemographicRecord& record) const;
};

}  // namespace assesskit

#endif  // ASSESSKIT_COMMON_DEMOGRAPHICS_H_
