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

#include "assesskit/plagiarism/fingerprint.h"

#include <deque>

#include "assesskit/common/random.h"
#include "assesskit/common/strings.h"

namespace assesskit::plagiarism {
namespace {

constexpr uint64_t kBase = 0x100000001b3ull;

bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsAsciiPunct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
         (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e);
}

// Length of the UTF-8 sequence starting with lead byte c.
size_t SequenceLength(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xe) return 3;
  if ((c >> 3) == 0x1e) return 4;
  return 1;
}

enum class CharClass { kKeep, kSpace, kDrop };

CharClass Classify(std::string_view text, size_t i, size_t len) {
  const unsigned char c = static_cast<unsigned char>(text[i]);
  if (len == 1) {
    if (IsAsciiSpace(c)) return CharClass::kSpace;
    if (IsAsciiPunct(c) || c < 0x20 || c == 0x7f) return CharClass::kDrop;
    return CharClass::kKeep;
  }
  if (len == 2 && c == 0xc2) {
    const unsigned char c1 = static_cast<unsigned char>(text[i + 1]);
    if (c1 == 0xa0) return CharClass::kSpace;  // no-break space
    // Latin-1 punctuation: inverted marks, guillemets, section sign etc.
    if (c1 == 0xa1 || c1 == 0xa7 || c1 == 0xab || c1 == 0xb6 || c1 == 0xb7 ||
        c1 == 0xbb || c1 == 0xbf) {
      return CharClass::kDrop;
    }
  }
  if (len == 3 && c == 0xe2) {
    const unsigned char c1 = static_cast<unsigned char>(text[i + 1]);
    const unsigned char c2 = static_cast<unsigned char>(text[i + 2]);
    if (c1 == 0x80 || c1 == 0x81) {
      // U+2000..U+206F general punctuation; U+2000..U+200B and U+202F,
      // U+205F are spaces.
      const int cp = 0x2000 + ((c1 & 0x3f) << 6) + (c2 & 0x3f);
      if (cp <= 0x200b || cp == 0x202f || cp == 0x205f) return CharClass::kSpace;
      return CharClass::kDrop;
    }
  }
  if (len == 3 && c == 0xe3 && text[i + 1] == '\x80' && text[i + 2] == '\x80') {
    return CharClass::kSpace;  // ideographic space
  }
  return CharClass::kKeep;
}

}  // namespace

NormalizedText Normalize(std::string_view text) {
  NormalizedText out;
  bool pending_space = false;
  size_t space_begin = 0, space_end = 0;
  for (size_t i = 0; i < text.size();) {
    size_t len = std::min(SequenceLength(static_cast<unsigned char>(text[i])),
                          text.size() - i);
    switch (Classify(text, i, len)) {
      case CharClass::kSpace:
        if (!pending_space) space_begin = i;
        pending_space = true;
        space_end = i + len;
        break;
      case CharClass::kDrop:
        break;
      case CharClass::kKeep:
        if (pending_space && !out.text.empty()) {
          out.text.push_back(' ');
          out.source_begin.push_back(space_begin);
          out.source_end.push_back(space_end);
        }
        pending_space = false;
        for (size_t j = 0; j < len; ++j) {
          char c = text[i + j];
          if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
          out.text.push_back(c);
          out.source_begin.push_back(i);
          out.source_end.push_back(i + len);
        }
        break;
    }
    i += len;
  }
  return out;
}

absl::Status WinnowParams::Validate() const {
  if (k < 2 || w < 1) {
    return absl::InvalidArgumentError(
        StrCat("winnowing needs k >= 2 and w >= 1, got k=", k, " w=", w));
  }
  return absl::OkStatus();
}

uint64_t HashKGram(std::string_view gram) {
  uint64_t h = 0;
  for (char c : gram) h = h * kBase + static_cast<unsigned char>(c);
  return Mix64(h);
}

std::vector<uint64_t> KGramHashes(std::string_view text, int k) {
  std::vector<uint64_t> hashes;
  const size_t kk = static_cast<size_t>(k);
  if (k < 1 || text.size() < kk) return hashes;
  uint64_t top = 1;  // kBase^(k-1)
  for (int i = 1; i < k; ++i) top *= kBase;
  uint64_t h = 0;
  for (size_t i = 0; i < kk; ++i) h = h * kBase + static_cast<unsigned char>(text[i]);
  hashes.reserve(text.size() - kk + 1);
  hashes.push_back(Mix64(h));
  for (size_t i = kk; i < text.size(); ++i) {
    h -= top * static_cast<unsigned char>(text[i - kk]);
    h = h * kBase + static_cast<unsigned char>(text[i]);
    hashes.push_back(Mix64(h));
  }
  return hashes;
}

std::vector<size_t> Winnow(std::span<const uint64_t> hashes, int w) {
  std::vector<size_t> selected;
  if (hashes.empty() || w < 1) return selected;
  const size_t window = std::min(static_cast<size_t>(w), hashes.size());
  // Monotone deque of candidate indices; hashes increase strictly from front
  // to back after popping, with later equal hashes replacing earlier ones so
  // the front is the rightmost minimum.
  std::deque<size_t> dq;
  for (size_t i = 0; i < hashes.size(); ++i) {
    while (!dq.empty() && hashes[dq.back()] >= hashes[i]) dq.pop_back();
    dq.push_back(i);
    if (i + 1 < window) continue;
    const size_t start = i + 1 - window;
    while (dq.front() < start) dq.pop_front();
    if (selected.empty() || selected.back() != dq.front()) selected.push_back(dq.front());
  }
  return selected;
}

std::vector<Fingerprint> FingerprintNormalized(const NormalizedText& normalized,
                                               const WinnowParams& params,
                                               const KGramHash& hash) {
  std::vector<Fingerprint> out;
  const std::string& text = normalized.text;
  if (!params.Validate().ok() || text.size() < static_cast<size_t>(params.k)) {
    return out;
  }
  std::vector<uint64_t> hashes;
  if (hash) {
    for (size_t i = 0; i + params.k <= text.size(); ++i) {
      hashes.push_back(hash(std::string_view(text).substr(i, params.k)));
    }
  } else {
    hashes = KGramHashes(text, params.k);
  }
  for (size_t idx : Winnow(hashes, params.w)) {
    out.push_back({hashes[idx], idx, normalized.source_begin[idx]});
  }
  return out;
}

std::vector<Fingerprint> FingerprintText(std::string_view text,
                                         const WinnowParams& params,
                                         const KGramHash& hash) {
  return FingerprintNormalized(Normalize(text), params, hash);
}

}  // namespace assesskit::plagiarism
