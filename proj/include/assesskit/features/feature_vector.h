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

#ifndef ASSESSKIT_FEATURES_FEATURE_VECTOR_H_
#define ASSESSKIT_FEATURES_FEATURE_VECTOR_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace assesskit::features {

// The four writing sub-constructs scored by the rubric.
enum class Subconstruct { kContent = 0, kCoherence = 1, kLexis = 2, kGrammar = 3 };

inline constexpr std::array<Subconstruct, 4> kAllSubconstructs = {
    Subconstruct::kContent, Subconstruct::kCoherence, Subconstruct::kLexis,
    Subconstruct::kGrammar};

std::string_view SubconstructName(Subconstruct s);
absl::StatusOr<Subconstruct> ParseSubconstruct(std::string_view name);

// Upper bound on the number of named features in a schema.
inline constexpr size_t kMaxFeatures = 18;

struct Feature {
  std::string name;
  double value = 0.0;
  Subconstruct group = Subconstruct::kContent;

  bool operator==(const Feature&) const = default;
};

// Ordered named features. Every feature belongs to exactly one sub-construct.
class FeatureVector {
 public:
  FeatureVector() = default;

  void Add(std::string name, double value, Subconstruct group);
  void Append(const FeatureVector& other);

  size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }
  const std::vector<Feature>& features() const { return features_; }
  const Feature& operator[](size_t i) const { return features_[i]; }

  std::vector<std::string> names() const;
  std::vector<double> values() const;
  std::map<std::string, Subconstruct> grouping() const;
  std::optional<double> Get(std::string_view name) const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<Feature> features_;
};

}  // namespace assesskit::features

#endif  // ASSESSKIT_FEATURES_FEATURE_VECTOR_H_
