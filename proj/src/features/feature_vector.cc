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

#include "assesskit/features/feature_vector.h"

#include "absl/status/status.h"
#include "assesskit/common/strings.h"

namespace assesskit::features {

std::string_view SubconstructName(Subconstruct s) {
  switch (s) {
    case Subconstruct::kContent:
      return "content";
    case Subconstruct::kCoherence:
      return "coherence";
    case Subconstruct::kLexis:
      return "lexis";
    case Subconstruct::kGrammar:
      return "grammar";
  }
  return "unknown";
}

absl::StatusOr<Subconstruct> ParseSubconstruct(std::string_view name) {
  for (Subconstruct s : kAllSubconstructs) {
    if (SubconstructName(s) == name) return s;
  }
  return absl::InvalidArgumentError(
      StrCat("unknown sub-construct '", name, "'"));
}

void FeatureVector::Add(std::string name, double value, Subconstruct group) {
  features_.push_back({std::move(name), value, group});
}

void FeatureVector::Append(const FeatureVector& other) {
  features_.insert(features_.end(), other.features_.begin(),
                   other.features_.end());
}

std::vector<std::string> FeatureVector::names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.name);
  return out;
}

std::vector<double> FeatureVector::values() const {
  std::vector<double> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.value);
  return out;
}

std::map<std::string, Subconstruct> FeatureVector::grouping() const {
  std::map<std::string, Subconstruct> out;
  for (const auto& f : features_) out.emplace(f.name, f.group);
  return out;
}

std::optional<double> FeatureVector::Get(std::string_view name) const {
  for (const auto& f : features_) {
    if (f.name == name) return f.value;
  }
  return std::nullopt;
}

}  // namespace assesskit::features
