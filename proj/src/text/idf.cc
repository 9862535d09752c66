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

#include "assesskit/text/idf.h"

#include <cmath>
#include <set>

#include "absl/status/status.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::text {
namespace {

double IdfFormula(int doc_count, int df) {
  return std::log(static_cast<double>(doc_count + 1) /
                  static_cast<double>(df + 1)) +
         1.0;
}

}  // namespace

absl::StatusOr<IdfTable> IdfTable::Build(
    std::span<const std::string> documents) {
  if (documents.empty()) {
    return absl::InvalidArgumentError("IDF corpus is empty");
  }
  std::map<std::string, int> df;
  for (const std::string& doc : documents) {
    const auto tokens = TokenizeWords(doc);
    const std::set<std::string> unique(tokens.begin(), tokens.end());
    for (const std::string& token : unique) ++df[token];
  }
  return FromDocumentFrequencies(static_cast<int>(documents.size()),
                                 std::move(df));
}

absl::StatusOr<IdfTable> IdfTable::FromDocumentFrequencies(
    int doc_count, std::map<std::string, int> document_frequency) {
  if (doc_count <= 0) {
    return absl::InvalidArgumentError("IDF document count must be positive");
  }
  IdfTable table;
  table.doc_count_ = doc_count;
  for (auto& [token, df] : document_frequency) {
    if (df < 0 || df > doc_count) {
      return absl::InvalidArgumentError("document frequency out of range for '" +
                                        token + "'");
    }
    table.weights_.emplace(token, IdfFormula(doc_count, df));
    table.document_frequency_.emplace(token, df);
  }
  return table;
}

double IdfTable::Weight(std::string_view token) const {
  const auto it = weights_.find(token);
  if (it != weights_.end()) return it->second;
  return IdfFormula(doc_count_, 0);
}

}  // namespace assesskit::text
