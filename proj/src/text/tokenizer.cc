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

#include "assesskit/text/tokenizer.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace assesskit::text {
namespace {

bool IsAsciiAlnum(unsigned char c) { return std::isalnum(c) != 0; }

// Byte length of the UTF-8 sequence starting with lead byte c.
size_t Utf8Length(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c >> 5) == 0x6) return 2;
  if ((c >> 4) == 0xe) return 3;
  if ((c >> 3) == 0x1e) return 4;
  return 1;
}

enum class CharClass { kWord, kApostrophe, kOther };

// Classifies the code point at text[pos] and reports its byte length.
CharClass Classify(std::string_view text, size_t pos, size_t* length) {
  const auto c = static_cast<unsigned char>(text[pos]);
  *length = std::min(Utf8Length(c), text.size() - pos);
  if (c < 0x80) {
    if (IsAsciiAlnum(c)) return CharClass::kWord;
    if (c == '\'') return CharClass::kApostrophe;
    return CharClass::kOther;
  }
  // U+2000..U+206F (general punctuation) is encoded as E2 80 xx / E2 81 xx.
  if (*length == 3 && c == 0xe2) {
    const auto c1 = static_cast<unsigned char>(text[pos + 1]);
    const auto c2 = static_cast<unsigned char>(text[pos + 2]);
    if (c1 == 0x80 && c2 == 0x99) return CharClass::kApostrophe;
    if (c1 == 0x80 || c1 == 0x81) return CharClass::kOther;
  }
  // No-break space.
  if (*length == 2 && c == 0xc2 &&
      static_cast<unsigned char>(text[pos + 1]) == 0xa0) {
    return CharClass::kOther;
  }
  return CharClass::kWord;
}

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

constexpr std::array<std::string_view, 17> kAbbreviations = {
    "dr", "mr", "mrs", "ms", "prof", "st", "jr", "sr", "vs",
    "e.g", "i.e", "inc", "ltd", "fig", "approx", "dept", "mt"};

constexpr std::array<std::string_view, 28> kPronouns = {
    "i",     "me",   "my",     "mine",  "you",    "your",  "yours",
    "he",    "him",  "his",    "she",   "her",    "hers",  "it",
    "its",   "we",   "us",     "our",   "ours",   "they",  "them",
    "their", "theirs", "this", "that",  "these",  "those", "itself"};

constexpr std::array<std::string_view, 70> kStopwords = {
    "a",     "an",    "the",   "and",   "or",    "but",    "nor",   "so",
    "yet",   "of",    "in",    "on",    "at",    "to",     "for",   "from",
    "by",    "with",  "about", "as",    "into",  "over",   "under", "than",
    "then",  "is",    "are",   "was",   "were",  "be",     "been",  "being",
    "am",    "do",    "does",  "did",   "have",  "has",    "had",   "will",
    "would", "can",   "could", "shall", "should", "may",   "might", "must",
    "not",   "no",    "there", "here",  "what",  "which",  "who",   "whom",
    "when",  "where", "why",   "how",   "all",   "any",    "some",  "very",
    "also",  "just",  "more",  "most",  "such",  "if"};

}  // namespace

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

TokenSequence Tokenize(std::string_view text) {
  TokenSequence seq;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t len;
    if (Classify(text, pos, &len) != CharClass::kWord) {
      pos += len;
      continue;
    }
    const size_t begin = pos;
    size_t end = pos + len;
    pos = end;
    while (pos < text.size()) {
      const CharClass cls = Classify(text, pos, &len);
      if (cls == CharClass::kWord) {
        pos += len;
        end = pos;
        continue;
      }
      if (cls == CharClass::kApostrophe && pos + len < text.size()) {
        size_t next_len;
        if (Classify(text, pos + len, &next_len) == CharClass::kWord) {
          pos += len + next_len;
          end = pos;
          continue;
        }
      }
      break;
    }
    seq.tokens.push_back(AsciiLower(text.substr(begin, end - begin)));
    seq.spans.push_back({begin, end});
  }
  return seq;
}

std::vector<std::string> TokenizeWords(std::string_view text) {
  return Tokenize(text).tokens;
}

bool IsAbbreviation(std::string_view word) {
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

bool IsStopword(std::string_view token) {
  return std::find(kStopwords.begin(), kStopwords.end(), token) !=
             kStopwords.end() ||
         IsPronoun(token);
}

bool IsPronoun(std::string_view token) {
  return std::find(kPronouns.begin(), kPronouns.end(), token) !=
         kPronouns.end();
}

bool IsContentWord(std::string_view token) {
  if (token.size() < 3) return false;
  const bool alphabetic = std::all_of(token.begin(), token.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '\'';
  });
  return alphabetic && !IsStopword(token);
}

std::vector<CharSpan> SplitSentences(std::string_view text,
                                     const SentenceSplitOptions& options) {
  std::vector<CharSpan> sentences;
  size_t pos = 0;
  auto skip_space = [&](size_t p) {
    while (p < text.size() && IsSpace(text[p])) ++p;
    return p;
  };
  size_t start = skip_space(0);
  pos = start;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c != '.' && c != '?' && c != '!') {
      ++pos;
      continue;
    }
    size_t end = pos + 1;
    while (end < text.size() &&
           (text[end] == '.' || text[end] == '?' || text[end] == '!' ||
            text[end] == '"' || text[end] == '\'' || text[end] == ')' ||
            text[end] == ']')) {
      ++end;
    }
    pos = end;
    if (end >= text.size() || !IsSpace(text[end])) continue;
    const size_t next = skip_space(end);
    if (next >= text.size()) break;
    if (options.require_uppercase) {
      // Opening quotes or brackets may precede the capital.
      size_t first = next;
      while (first < text.size() &&
             (text[first] == '"' || text[first] == '\'' ||
              text[first] == '(' || text[first] == '[')) {
        ++first;
      }
      if (first >= text.size() || !(text[first] >= 'A' && text[first] <= 'Z')) {
        continue;
      }
    }
    if (c == '.') {
      // The word that carries the period, e.g. "Dr" in "Dr. Smith".
      size_t word_begin = end;
      while (word_begin > start && !IsSpace(text[word_begin - 1])) --word_begin;
      std::string word = AsciiLower(text.substr(word_begin, end - word_begin));
      while (!word.empty() && !std::isalnum(static_cast<unsigned char>(
                                  word.back()))) {
        word.pop_back();
      }
      while (!word.empty() && !std::isalnum(static_cast<unsigned char>(
                                  word.front()))) {
        word.erase(word.begin());
      }
      if (IsAbbreviation(word)) continue;
    }
    sentences.push_back({start, end});
    start = next;
    pos = next;
  }
  if (start < text.size()) {
    size_t end = text.size();
    while (end > start && IsSpace(text[end - 1])) --end;
    if (end > start) sentences.push_back({start, end});
  }
  return sentences;
}

}  // namespace assesskit::text
