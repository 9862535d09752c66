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

#ifndef ASSESSKIT_PLAGIARISM_DETECTOR_H_
#define ASSESSKIT_PLAGIARISM_DETECTOR_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/plagiarism/fingerprint.h"
#include "json.hpp"

namespace assesskit::plagiarism {

enum class SourceClass { kInternet, kHistorical };
std::string_view SourceClassName(SourceClass c);

struct SourceDocument {
  std::string doc_id;
  SourceClass source_class = SourceClass::kInternet;
  std::string session_id;  // historical responses only
  std::string text;
};

// JSON-lines {"doc_id","source_class","text"[,"session_id"]}.
absl::StatusOr<std::vector<SourceDocument>> ParseSourceDocuments(std::string_view jsonl);
// A directory of text files (doc_id = file name, internet class, sorted by
// name) or a JSON-lines file.
absl::StatusOr<std::vector<SourceDocument>> LoadSourceDocuments(const std::string& path);

struct Posting {
  uint32_t doc = 0;       // index into documents()
  uint32_t position = 0;  // normalized offset
};

// Immutable winnowed fingerprint index.
class DocumentIndex {
 public:
  // Fails on duplicate doc ids or invalid parameters.
  static absl::StatusOr<std::shared_ptr<const DocumentIndex>> Build(
      std::vector<SourceDocument> documents, const WinnowParams& params = {});

  const WinnowParams& params() const { return params_; }
  size_t size() const { return documents_.size(); }
  const SourceDocument& document(size_t i) const { return documents_[i]; }
  const NormalizedText& normalized(size_t i) const { return normalized_[i]; }
  // Index of doc_id, or -1.
  int Find(std::string_view doc_id) const;
  const std::vector<Posting>* Lookup(uint64_t hash) const;

 private:
  DocumentIndex() = default;

  WinnowParams params_;
  std::vector<SourceDocument> documents_;
  std::vector<NormalizedText> normalized_;
  std::unordered_map<uint64_t, std::vector<Posting>> postings_;
  std::unordered_map<std::string, int> by_id_;
};

struct MatchSpan {
  std::string doc_id;
  // Normalized ranges [begin, end); the two substrings are identical.
  size_t response_begin = 0, response_end = 0;
  size_t source_begin = 0, source_end = 0;
  // The same ranges in original text offsets.
  size_t response_char_begin = 0, response_char_end = 0;
  size_t source_char_begin = 0, source_char_end = 0;

  size_t length() const { return response_end - response_begin; }
  bool operator==(const MatchSpan&) const = default;
};

// Shared fingerprints are verified and extended to maximal identical
// normalized substrings. Spans are sorted by (doc_id, response_begin,
// source_begin); a span whose response range lies inside another span for
// the same document is dropped.
absl::StatusOr<std::vector<MatchSpan>> Scan(const DocumentIndex& index,
                                            std::string_view response,
                                            const WinnowParams& params);

enum class Classification { kBenign, kSuspect };
std::string_view ClassificationName(Classification c);

struct PlagiarismFlag {
  std::string response_id;
  std::string response_text;
  std::vector<MatchSpan> spans;
  // Union of the span response ranges, merged, in original text offsets.
  std::vector<std::pair<size_t, size_t>> covered_ranges;
  double coverage = 0.0;  // covered normalized bytes / normalized length
  Classification classification = Classification::kBenign;
  double threshold = 0.3;
};

inline constexpr double kDefaultThreshold = 0.30;

PlagiarismFlag Classify(std::string response_id, std::string_view response,
                        std::vector<MatchSpan> spans, double threshold = kDefaultThreshold);

struct HighlightSpan {
  size_t response_begin = 0, response_end = 0;  // original offsets
  size_t source_begin = 0, source_end = 0;      // original offsets in source
  size_t length = 0;                            // normalized length
};

struct SourceHighlights {
  std::string doc_id;
  bool available = true;  // false once the document left the index
  SourceClass source_class = SourceClass::kInternet;
  std::string session_id;
  std::string source_text;
  std::vector<HighlightSpan> spans;  // longest first
};

// Sources ordered by their longest span, then doc_id.
std::vector<SourceHighlights> RenderHighlights(const PlagiarismFlag& flag,
                                               const DocumentIndex& index);

nlohmann::json ToJson(const MatchSpan& span);
nlohmann::json ToJson(const PlagiarismFlag& flag);
nlohmann::json ToJson(const std::vector<SourceHighlights>& highlights);

}  // namespace assesskit::plagiarism

#endif  // ASSESSKIT_PLAGIARISM_DETECTOR_H_
