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

#include <algorithm>
#include <map>
#include <set>

#include "assesskit/common/random.h"
#include "assesskit/plagiarism/detector.h"
#include "assesskit/plagiarism/fingerprint.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace assesskit::plagiarism {
namespace {

using ::testing::ElementsAre;

std::string RandomLetters(Rng& rng, size_t n, std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz") {
  std::string s(n, ' ');
  for (char& c : s) c = alphabet[rng.UniformInt(alphabet.size())];
  return s;
}

TEST(NormalizeTest, LowercasesStripsAndCollapses) {
  const std::string text = "  Hello,   World!\n\tIt's  \xe2\x80\x9c" "fine\xe2\x80\x9d. ";
  NormalizedText n = Normalize(text);
  EXPECT_EQ(n.text, "hello world its fine");
  ASSERT_EQ(n.source_begin.size(), n.text.size());
  // 'w' of World.
  EXPECT_EQ(text[n.source_begin[6]], 'W');
  // The space before "world" maps to the first collapsed whitespace byte.
  EXPECT_EQ(n.source_begin[5], 8u);
  auto [b, e] = n.SourceRange(0, 5);
  EXPECT_EQ(text.substr(b, e - b), "Hello");
  EXPECT_EQ(Normalize("").text, "");
  EXPECT_EQ(Normalize("...  !!").text, "");
}

TEST(FingerprintTest, ShorterThanKIsEmpty) {
  EXPECT_TRUE(FingerprintText("short text", {25, 16}).empty());
  EXPECT_TRUE(FingerprintText("", {25, 16}).empty());
  EXPECT_EQ(FingerprintText("exactly five", {12, 4}).size(), 1u);
}

TEST(FingerprintTest, IdenticalTextsIdenticalMultisets) {
  Rng rng(1);
  const std::string text = RandomLetters(rng, 500, "ab cd");
  auto a = FingerprintText(text, {8, 5});
  auto b = FingerprintText(text, {8, 5});
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.empty());
}

TEST(FingerprintTest, HandWalkedTraceWithStatedHash) {
  // Stated hash: abc=5 bcd=3 cde=3 def=7 efg=1 fgh=4. Windows of 2:
  // [5,3]->1  [3,3]->2 (rightmost)  [3,7]->2  [7,1]->4  [1,4]->4
  const std::map<std::string, uint64_t> table = {{"abc", 5}, {"bcd", 3}, {"cde", 3},
                                                 {"def", 7}, {"efg", 1}, {"fgh", 4}};
  auto fps = FingerprintText("abcdefgh", {3, 2}, [&](std::string_view g) {
    return table.at(std::string(g));
  });
  std::vector<size_t> positions;
  std::vector<uint64_t> hashes;
  for (const auto& fp : fps) {
    positions.push_back(fp.position);
    hashes.push_back(fp.hash);
  }
  EXPECT_THAT(positions, ElementsAre(1, 2, 4));
  EXPECT_THAT(hashes, ElementsAre(3, 3, 1));
}

TEST(FingerprintTest, ClassicWinnowingSequence) {
  // The standard worked example for window size 4 selects hashes
  // 17 17 8 39 17.
  const std::vector<uint64_t> hashes = {77, 74, 42, 17, 98, 50, 17, 98, 8,
                                        88, 67, 39, 77, 74, 42, 17, 98};
  std::vector<uint64_t> selected;
  for (size_t i : Winnow(hashes, 4)) selected.push_back(hashes[i]);
  EXPECT_THAT(selected, ElementsAre(17, 17, 8, 39, 17));
  EXPECT_THAT(Winnow(hashes, 4), ElementsAre(3, 6, 8, 11, 15));
}

TEST(FingerprintTest, RollingHashMatchesDirectHash) {
  Rng rng(2);
  const std::string text = RandomLetters(rng, 200);
  const auto rolling = KGramHashes(text, 25);
  ASSERT_EQ(rolling.size(), 176u);
  for (size_t i = 0; i < rolling.size(); ++i) {
    EXPECT_EQ(rolling[i], HashKGram(std::string_view(text).substr(i, 25)));
  }
}

TEST(FingerprintTest, SourcePositionsMapBack) {
  const std::string text = "The Quick,  Brown fox; jumps over the lazy dog";
  for (const auto& fp : FingerprintText(text, {5, 3})) {
    const NormalizedText n = Normalize(text);
    EXPECT_EQ(fp.source_position, n.source_begin[fp.position]);
  }
}

std::shared_ptr<const DocumentIndex> MakeIndex(std::vector<SourceDocument> docs,
                                               WinnowParams params) {
  auto index = DocumentIndex::Build(std::move(docs), params);
  EXPECT_TRUE(index.ok()) << index.status();
  return *index;
}

TEST(ScanTest, DisjointAlphabetFindsNothing) {
  Rng rng(3);
  auto index = MakeIndex({{"d1", SourceClass::kInternet, "", RandomLetters(rng, 400, "abcdef")}},
                         {5, 4});
  auto spans = Scan(*index, RandomLetters(rng, 300, "uvwxyz"), {5, 4});
  ASSERT_TRUE(spans.ok());
  EXPECT_TRUE(spans->empty());
}

TEST(ScanTest, IdenticalDocumentOneFullSpan) {
  const std::string text =
      "Students who memorize essays often reproduce them word for word, "
      "including the punctuation and the awkward transitions.";
  auto index = MakeIndex({{"d1", SourceClass::kInternet, "", text}}, {25, 16});
  auto spans = Scan(*index, text, {25, 16});
  ASSERT_TRUE(spans.ok());
  ASSERT_EQ(spans->size(), 1u);
  const MatchSpan& s = (*spans)[0];
  EXPECT_EQ(s.response_begin, 0u);
  EXPECT_EQ(s.response_end, Normalize(text).text.size());
  EXPECT_EQ(s.response_char_begin, 0u);
  EXPECT_EQ(s.response_char_end, text.size() - 1);  // final period stripped
  PlagiarismFlag flag = Classify("r", text, *spans);
  EXPECT_DOUBLE_EQ(flag.coverage, 1.0);
  EXPECT_EQ(flag.classification, Classification::kSuspect);
}

TEST(ScanTest, ParameterMismatchIsError) {
  auto index = MakeIndex({}, {25, 16});
  EXPECT_FALSE(Scan(*index, "x", {20, 16}).ok());
  EXPECT_FALSE(DocumentIndex::Build({}, {1, 1}).ok());
  EXPECT_FALSE(DocumentIndex::Build({{"a", SourceClass::kInternet, "", "x"},
                                     {"a", SourceClass::kInternet, "", "y"}}).ok());
}

TEST(ScanTest, ToyCorpusMatchesCommonSubstringOracle) {
  const WinnowParams params{5, 4};
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(100 + seed);
    std::vector<SourceDocument> docs;
    for (int d = 0; d < 3; ++d) {
      docs.push_back({"doc" + std::to_string(d), SourceClass::kInternet, "",
                      RandomLetters(rng, 300)});
    }
    const int target = static_cast<int>(rng.UniformInt(3));
    const size_t at = rng.UniformInt(260);
    const std::string run = docs[target].text.substr(at, 40);
    const std::string response = RandomLetters(rng, 100) + run + RandomLetters(rng, 100);
    auto index = MakeIndex(docs, params);
    auto spans = Scan(*index, response, params);
    ASSERT_TRUE(spans.ok());

    std::set<std::pair<std::string, oracles::CommonRun>> scanned;
    for (const auto& s : *spans) {
      scanned.insert({s.doc_id, {s.response_begin, s.response_end, s.source_begin, s.source_end}});
    }
    const size_t guaranteed = params.w + params.k - 1;
    bool planted_found = false;
    for (const auto& doc : docs) {
      const auto runs = oracles::MaximalCommonRuns(Normalize(response).text,
                                                   Normalize(doc.text).text, params.k);
      for (const auto& run : runs) {
        if (run.a_end - run.a_begin >= guaranteed) {
          EXPECT_TRUE(scanned.contains({doc.doc_id, run})) << "seed " << seed;
        }
        planted_found |= doc.doc_id == docs[target].doc_id && run.a_end - run.a_begin >= 40;
      }
      // Every reported span is a genuine maximal common run.
      for (const auto& [id, s] : scanned) {
        if (id != doc.doc_id) continue;
        EXPECT_NE(std::find(runs.begin(), runs.end(), s), runs.end()) << "seed " << seed;
      }
    }
    EXPECT_TRUE(planted_found);
  }
}

TEST(ScanTest, InsertionOrderDoesNotMatter) {
  Rng rng(9);
  std::vector<SourceDocument> docs;
  for (int d = 0; d < 8; ++d) {
    docs.push_back({"d" + std::to_string(d), SourceClass::kInternet, "", RandomLetters(rng, 500, "abc de")});
  }
  const std::string response = docs[2].text.substr(50, 120) + docs[5].text.substr(0, 200);
  auto first = Scan(*MakeIndex(docs, {8, 6}), response, {8, 6});
  std::reverse(docs.begin(), docs.end());
  auto second = Scan(*MakeIndex(docs, {8, 6}), response, {8, 6});
  ASSERT_TRUE(first.ok() && second.ok());
  EXPECT_EQ(*first, *second);
  EXPECT_FALSE(first->empty());
}

TEST(ScanTest, CoverageIsMonotoneInTheIndex) {
  Rng rng(10);
  std::vector<SourceDocument> docs;
  std::string response;
  for (int d = 0; d < 6; ++d) {
    docs.push_back({"d" + std::to_string(d), SourceClass::kInternet, "", RandomLetters(rng, 300, "abcdefg hij")});
    response += docs.back().text.substr(rng.UniformInt(200), 60) + " ";
  }
  double previous = 0.0;
  for (size_t n = 0; n <= docs.size(); ++n) {
    std::vector<SourceDocument> prefix(docs.begin(), docs.begin() + n);
    auto spans = Scan(*MakeIndex(prefix, {10, 8}), response, {10, 8});
    ASSERT_TRUE(spans.ok());
    const double coverage = Classify("r", response, *spans).coverage;
    EXPECT_GE(coverage, previous);
    previous = coverage;
  }
  EXPECT_GT(previous, 0.9);
}

TEST(ScanTest, PlantedSubstringsAreFound) {
  const WinnowParams params{25, 16};
  Rng rng(77);
  std::vector<SourceDocument> docs;
  for (int d = 0; d < 50; ++d) {
    docs.push_back({"d" + std::to_string(d), SourceClass::kInternet, "", RandomLetters(rng, 800, "abcdefghij klmno")});
  }
  auto index = MakeIndex(docs, params);
  // The guarantee is stated in normalized characters, so collapsed runs of
  // whitespace inside a raw plant can push it below the threshold; only
  // plants that stay at or above w + k - 1 after normalization are counted.
  int checked = 0;
  for (int trial = 0; checked < 200; ++trial) {
    const size_t d = rng.UniformInt(docs.size());
    const size_t len = params.w + params.k - 1 + rng.UniformInt(40);
    const size_t at = rng.UniformInt(docs[d].text.size() - len);
    const std::string planted = docs[d].text.substr(at, len);
    const size_t normalized_len = Normalize(planted).text.size();
    if (normalized_len < static_cast<size_t>(params.w + params.k - 1)) continue;
    ++checked;
    const std::string response = RandomLetters(rng, 200, "pqrstuvwxyz ") + planted +
                                 RandomLetters(rng, 200, "pqrstuvwxyz ");
    auto spans = Scan(*index, response, params);
    ASSERT_TRUE(spans.ok());
    bool hit = false;
    for (const auto& s : *spans) {
      hit |= s.doc_id == docs[d].doc_id && s.length() >= normalized_len;
    }
    EXPECT_TRUE(hit) << "trial " << trial << " planted [" << planted << "]";
  }
}

MatchSpan Span(std::string doc, size_t rb, size_t re, size_t sb) {
  MatchSpan s;
  s.doc_id = std::move(doc);
  s.response_begin = s.response_char_begin = rb;
  s.response_end = s.response_char_end = re;
  s.source_begin = s.source_char_begin = sb;
  s.source_end = s.source_char_end = sb + (re - rb);
  return s;
}

TEST(ClassifyTest, Examples) {
  const std::string response(200, 'x');
  PlagiarismFlag none = Classify("r", response, {});
  EXPECT_EQ(none.coverage, 0.0);
  EXPECT_EQ(none.classification, Classification::kBenign);

  PlagiarismFlag full = Classify("r", response, {Span("d", 0, 200, 0)});
  EXPECT_EQ(full.coverage, 1.0);
  EXPECT_EQ(full.classification, Classification::kSuspect);

  // 30 + 20 characters of 200.
  PlagiarismFlag two = Classify("r", response, {Span("d", 10, 40, 0), Span("e", 100, 120, 0)});
  EXPECT_DOUBLE_EQ(two.coverage, 0.25);
  EXPECT_EQ(two.classification, Classification::kBenign);
  EXPECT_EQ(Classify("r", response, two.spans, 0.25).classification,
            Classification::kSuspect);

  // Overlapping spans are merged before counting.
  PlagiarismFlag overlap = Classify("r", response, {Span("d", 10, 40, 0), Span("e", 30, 50, 0)});
  EXPECT_DOUBLE_EQ(overlap.coverage, 0.2);
  ASSERT_EQ(overlap.covered_ranges.size(), 1u);
  EXPECT_EQ(overlap.covered_ranges[0], std::make_pair(size_t{10}, size_t{50}));
}

TEST(HighlightTest, EmptyFlagEmptyPayload) {
  auto index = MakeIndex({}, {25, 16});
  EXPECT_TRUE(RenderHighlights(PlagiarismFlag{}, *index).empty());
}

TEST(HighlightTest, OneSpanOneSource) {
  const std::string source = "The mitochondria is the powerhouse of the cell, as every student learns.";
  auto index = MakeIndex({{"wiki", SourceClass::kInternet, "", source}}, {10, 5});
  const std::string response = "I think that the mitochondria is the powerhouse of the cell!";
  auto spans = Scan(*index, response, {10, 5});
  ASSERT_TRUE(spans.ok());
  ASSERT_EQ(spans->size(), 1u);
  auto h = RenderHighlights(Classify("r", response, *spans), *index);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_TRUE(h[0].available);
  ASSERT_EQ(h[0].spans.size(), 1u);
  const HighlightSpan& s = h[0].spans[0];
  EXPECT_EQ(response.substr(s.response_begin, s.response_end - s.response_begin),
            "the mitochondria is the powerhouse of the cell");
  EXPECT_EQ(source.substr(s.source_begin, s.source_end - s.source_begin),
            "The mitochondria is the powerhouse of the cell");
}

TEST(HighlightTest, SourcesOrderedBySpanLength) {
  PlagiarismFlag flag;
  flag.spans = {Span("a", 0, 30, 0), Span("b", 40, 100, 0), Span("c", 120, 160, 0),
                Span("a", 170, 260, 0)};
  auto index = MakeIndex({{"a", SourceClass::kInternet, "", std::string(400, 'q')},
                          {"c", SourceClass::kHistorical, "sess-4", std::string(400, 'q')}},
                         {25, 16});
  auto h = RenderHighlights(flag, *index);
  std::vector<std::string> order;
  for (const auto& s : h) order.push_back(s.doc_id);
  // Longest spans: a=90, b=60, c=40.
  EXPECT_THAT(order, ElementsAre("a", "b", "c"));
  EXPECT_EQ(h[0].spans[0].length, 90u);
  EXPECT_EQ(h[0].spans[1].length, 30u);
  EXPECT_FALSE(h[1].available);
  EXPECT_EQ(ToJson(h)[1]["marker"], "source unavailable");
  EXPECT_EQ(h[2].session_id, "sess-4");
}

TEST(CorpusTest, ParsesJsonLines) {
  auto docs = ParseSourceDocuments(
      R"({"doc_id":"w1","source_class":"internet","text":"alpha"}
{"doc_id":"h1","source_class":"historical","session_id":"s9","text":"beta"})");
  ASSERT_TRUE(docs.ok());
  ASSERT_EQ(docs->size(), 2u);
  EXPECT_EQ((*docs)[1].source_class, SourceClass::kHistorical);
  EXPECT_EQ((*docs)[1].session_id, "s9");
  EXPECT_FALSE(ParseSourceDocuments(R"({"doc_id":"x","source_class":"moon","text":"a"})").ok());
}

}  // namespace
}  // namespace assesskit::plagiarism
