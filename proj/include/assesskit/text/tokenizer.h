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

#ifndef ASSESSKIT_TEXT_TOKENIZER_H_
#define ASSESSKIT_TEXT_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace assesskit::text {

// Half-open byte range [begin, end) into a source string.
struct CharSpan {
  size_t begin = 0;
  size_t end = 0;

  size_t length() const { return end - begin; }
  bool operator==(const CharSpan&) const = default;
};

// Lowercased word tokens together with the byte range each one was read
// from. tokens[i] is the ASCII-lowercased text of source[spans[i]].
struct TokenSequence {
  std::vector<std::string> tokens;
  std::vector<CharSpan> spans;

  size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Splits text into word tokens. Letters, digits and any non-ASCII code point
// outside the general punctuation block are word characters. An apostrophe
// (ASCII ' or U+2019) is kept when it sits between two word characters.
// Everything else separates tokens.
TokenSequence Tokenize(std::string_view text);

// Tokens only.
std::vector<std::string> TokenizeWords(std::string_view text);

struct SentenceSplitOptions {
  // When true a boundary needs an uppercase letter after the whitespace.
  // Feature extraction turns this off so that features do not depend on the
  // case of the response.
  bool require_uppercase = true;
};

// Splits text into sentence spans. A boundary sits after a run of [.?!]
// (plus closing quotes or brackets) that is followed by whitespace and then
// an uppercase letter, unless the word ending in '.' is a known abbreviation.
// The returned spans are trimmed and cover every non-whitespace byte.
std::vector<CharSpan> SplitSentences(std::string_view text,
                                     const SentenceSplitOptions& options = {});

// Lowercase abbreviations (without the final period) that never end a
// sentence, e.g. "dr", "mr", "e.g".
bool IsAbbreviation(std::string_view word);

// Closed-class English function words.
bool IsStopword(std::string_view token);

bool IsPronoun(std::string_view token);

// Alphabetic, at least three characters and not a stopword.
bool IsContentWord(std::string_view token);

std::string AsciiLower(std::string_view text);

}  // namespace assesskit::text

#endif  // ASSESSKIT_TEXT_TOKENIZER_H_
