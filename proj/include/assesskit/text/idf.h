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

#ifndef ASSESSKIT_TEXT_IDF_H_
#define ASSESSKIT_TEXT_IDF_H_

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace assesskit::text {

// Smoothed inverse document frequency:
//   idf(t) = ln((N + 1) / (df(t) + 1)) + 1
// Tokens never seen in training get df = 0, so every weight is positive.
class IdfTable {
 public:
  // Each document is tokenized with Tokenize(). Fails on an empty corpus.
  static absl::StatusOr<IdfTable> Build(std::span<const std::string> documents);

  // Rebuilds a table from stored document frequencies.
  static absl::StatusOr<IdfTable> FromDocumentFrequencies(
      int doc_count, std::map<std::string, int> document_frequency);

  double Weight(std::string_view token) const;
  int doc_count() const { return doc_count_; }
  const std::map<std::string, double, std::less<>>& weights() const {
    return weights_;
  }
  const std::map<std::string, int, std::less<>>& document_frequency() const {
    return document_frequency_;
  }

 private:
  IdfTable() = default;

  int doc_count_ = 0;
  std::map<std::string, int, std::less<>> document_frequency_;
  std::map<std::string, double, std::less<>> weights_;
};

}  // namespace assesskit::text

#endif  // ASSESSKIT_TEXT_IDF_H_
