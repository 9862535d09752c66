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

#ifndef ASSESSKIT_PLAGIARISM_FINGERPRINT_H_
#define ASSESSKIT_PLAGIARISM_FINGERPRINT_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"

namespace assesskit::plagiarism {

// Lowercased text with punctuation removed and whitespace runs collapsed to
// one space (leading and trailing whitespace dropped). Byte i of `text`
// came from source bytes [source_begin[i], source_end[i]).
struct NormalizedText {
  std::string text;
  std::vector<size_t> source_begin;
  std::vector<size_t> source_end;

  // Source range covering normalized bytes [begin, end).
  std::pair<size_t, size_t> SourceRange(size_t begin, size_t end) const {
    return {source_begin[begin], source_end[end - 1]};
  }
};

NormalizedText Normalize(std::string_view text);

struct WinnowParams {
  int k = 25;  // k-gram length in normalized bytes
  int w = 16;  // window length in k-grams

  absl::Status Validate() const;
  bool operator==(const WinnowParams&) const = default;
};

struct Fingerprint {
  uint64_t hash = 0;
  size_t position = 0;         // normalized offset of the k-gram
  size_t source_position = 0;  // offset in the original text
  bool operator==(const Fingerprint&) const = default;
};

using KGramHash = std::function<uint64_t(std::string_view)>;

// Hash of every k-gram of `text`, in order. The default is a polynomial
// rolling hash passed through a 64-bit mixer.
std::vector<uint64_t> KGramHashes(std::string_view text, int k);
uint64_t HashKGram(std::string_view gram);

// Indices selected by winnowing: the minimum of each window of w consecutive
// hashes, taking the rightmost on ties, each index recorded once. Fewer than
// w hashes form a single window.
std::vector<size_t> Winnow(std::span<const uint64_t> hashes, int w);

// Winnowed fingerprints of the normalized text. Empty when the normalized
// text is shorter than k. `hash` overrides the k-gram hash.
std::vector<Fingerprint> FingerprintText(std::string_view text,
                                         const WinnowParams& params,
                                         const KGramHash& hash = nullptr);
std::vector<Fingerprint> FingerprintNormalized(const NormalizedText& normalized,
                                               const WinnowParams& params,
                                               const KGramHash& hash = nullptr);

}  // namespace assesskit::plagiarism

#endif  // ASSESSKIT_PLAGIARISM_FINGERPRINT_H_
