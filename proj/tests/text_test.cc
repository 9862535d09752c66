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

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "assesskit/common/random.h"
#include "assesskit/text/corpus.h"
#include "assesskit/text/embedding.h"
#include "assesskit/text/idf.h"
#include "assesskit/text/ngram.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::text {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

TEST(Tokenize, StripsTerminalPunctuation) {
  EXPECT_THAT(TokenizeWords("The cat sat."), ElementsAre("the", "cat", "sat"));
}

TEST(Tokenize, EmptyInput) { EXPECT_THAT(TokenizeWords(""), IsEmpty()); }

TEST(Tokenize, KeepsInternalApostrophes) {
  EXPECT_THAT(TokenizeWords("don't stop"), ElementsAre("don't", "stop"));
  EXPECT_THAT(TokenizeWords("'quoted' words'"),
              ElementsAre("quoted", "words"));
  EXPECT_THAT(TokenizeWords("it\xe2\x80\x99s \xe2\x80\x9c" "fine\xe2\x80\x9d"),
              ElementsAre("it\xe2\x80\x99s", "fine"));
}

TEST(Tokenize, SpansPointIntoSource) {
  const std::string source = "  Hello, World! Don't-panic";
  const TokenSequence seq = Tokenize(source);
  ASSERT_EQ(seq.size(), 4);
  EXPECT_EQ(seq.spans[0], (CharSpan{2, 7}));
  EXPECT_EQ(seq.tokens[3], "panic");
}

// Every token equals the lowercased source bytes at its span; spans strictly
// increase and never overlap.
TEST(Tokenize, RoundTripProperty) {
  const std::string alphabet = "abcXYZ019 '.,;!?-\n\t";
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng.UniformInt(40));
    for (int i = 0; i < len; ++i) {
      text.push_back(alphabet[rng.UniformInt(alphabet.size())]);
    }
    const TokenSequence seq = Tokenize(text);
    ASSERT_EQ(seq.tokens.size(), seq.spans.size());
    size_t previous_end = 0;
    for (size_t i = 0; i < seq.size(); ++i) {
      ASSERT_FALSE(seq.tokens[i].empty());
      ASSERT_GE(seq.spans[i].begin, previous_end);
      ASSERT_LT(seq.spans[i].begin, seq.spans[i].end);
      previous_end = seq.spans[i].end;
      EXPECT_EQ(AsciiLower(text.substr(seq.spans[i].begin,
                                       seq.spans[i].length())),
                seq.tokens[i])
          << text;
    }
  }
}

std::vector<std::string> SentenceTexts(std::string_view text,
                                       SentenceSplitOptions options = {}) {
  std::vector<std::string> out;
  for (const auto& span : SplitSentences(text, options)) {
    out.emplace_back(text.substr(span.begin, span.length()));
  }
  return out;
}

TEST(SplitSentences, TwoTerminalPeriods) {
  EXPECT_THAT(SentenceTexts("A. B."), ElementsAre("A.", "B."));
}

TEST(SplitSentences, NoTerminator) {
  EXPECT_THAT(SentenceTexts("One sentence"), ElementsAre("One sentence"));
}

TEST(SplitSentences, AbbreviationDoesNotSplit) {
  EXPECT_THAT(SentenceTexts("Dr. Smith left. He ran."),
              ElementsAre("Dr. Smith left.", "He ran."));
  EXPECT_THAT(SentenceTexts("Use tools, e.g. Hammers. Then stop!"),
              ElementsAre("Use tools, e.g. Hammers.", "Then stop!"));
}

TEST(SplitSentences, LowercaseContinuationNeedsOption) {
  EXPECT_THAT(SentenceTexts("it rained. we left."),
              ElementsAre("it rained. we left."));
  EXPECT_THAT(SentenceTexts("it rained. we left.", {.require_uppercase = false}),
              ElementsAre("it rained.", "we left."));
}

TEST(SplitSentences, CoversAllNonWhitespace) {
  const std::string text = "  Why? \"Because.\" Fine!  Done  ";
  const auto spans = SplitSentences(text);
  std::string covered(text.size(), ' ');
  for (const auto& s : spans) {
    for (size_t i = s.begin; i < s.end; ++i) covered[i] = text[i];
  }
  for (size_t i = 0; i < text.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(text[i]))) {
      EXPECT_EQ(covered[i], text[i]);
    }
  }
  EXPECT_EQ(spans.size(), 4);
}

TEST(Idf, HandComputedWeights) {
  const std::vector<std::string> docs = {"a b", "a c", "a"};
  const auto idf = IdfTable::Build(docs);
  ASSERT_TRUE(idf.ok());
  EXPECT_DOUBLE_EQ(idf->Weight("a"), 1.0);
  EXPECT_NEAR(idf->Weight("b"), 1.6931, 1e-4);
  EXPECT_NEAR(idf->Weight("b"), std::log(2.0) + 1.0, 1e-15);
  EXPECT_NEAR(idf->Weight("zebra"), 2.3863, 1e-4);
  EXPECT_NEAR(idf->Weight("zebra"), std::log(4.0) + 1.0, 1e-15);
}

TEST(Idf, EmptyCorpusIsError) {
  EXPECT_FALSE(IdfTable::Build(std::vector<std::string>{}).ok());
}

TEST(Idf, WeightsPositiveAndMonotoneInDocumentFrequency) {
  Rng rng(3);
  const std::vector<std::string> vocab = {"x", "y", "z", "w", "v", "u"};
  std::vector<std::string> docs;
  for (int d = 0; d < 30; ++d) {
    std::string doc;
    for (const auto& token : vocab) {
      if (rng.Bernoulli(0.15 * (1 + (&token - vocab.data())))) {
        doc += token + " ";
      }
    }
    docs.push_back(doc);
  }
  const auto idf = IdfTable::Build(docs);
  ASSERT_TRUE(idf.ok());
  for (const auto& [a, dfa] : idf->document_frequency()) {
    EXPECT_GT(idf->Weight(a), 0.0);
    for (const auto& [b, dfb] : idf->document_frequency()) {
      if (dfa > dfb) EXPECT_LE(idf->Weight(a), idf->Weight(b));
    }
  }
}

TEST(NGram, UnigramAddK) {
  const std::vector<std::vector<std::string>> docs = {{"a", "a", "b"}};
  const auto model = NGramModel::Train(docs, 1, 1.0);
  ASSERT_TRUE(model.ok());
  EXPECT_EQ(model->vocabulary_size(), 2);
  EXPECT_DOUBLE_EQ(*model->Probability({}, "a"), 0.5);
  EXPECT_DOUBLE_EQ(*model->Probability({}, "b"), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(*model->Probability({}, "unseen"), 1.0 / 6.0);
}

TEST(NGram, EmptySequenceHasZeroLogProb) {
  const std::vector<std::vector<std::string>> docs = {{"a"}};
  const auto model = NGramModel::Train(docs, 3, 0.5);
  ASSERT_TRUE(model.ok());
  EXPECT_EQ(*model->LogProb({}), 0.0);
}

TEST(NGram, EmptyVocabularyIsError) {
  const auto model = NGramModel::Train({}, 2, 1.0);
  ASSERT_TRUE(model.ok());
  const std::vector<std::string> tokens = {"a"};
  EXPECT_FALSE(model->LogProb(tokens).ok());
}

TEST(NGram, InvalidParameters) {
  EXPECT_FALSE(NGramModel::Train({}, 0, 1.0).ok());
  EXPECT_FALSE(NGramModel::Train({}, 2, 0.0).ok());
}

// Count table for "a b a b" with one start symbol:
//   <s> -> a : 1, a -> b : 2, b -> a : 1.   V = 2.
// P(b|a) = (2 + 1) / (2 + 1*3) = 0.6, P(a|b) = (1+1)/(1+3) = 0.5,
// P(a|<s>) = (1+1)/(1+3) = 0.5.
TEST(NGram, BigramHandCountTable) {
  const auto model = NGramModel::TrainOnText(std::vector<std::string>{"a b a b"}, 2);
  ASSERT_TRUE(model.ok());
  const std::vector<std::string> a = {"a"};
  const std::vector<std::string> b = {"b"};
  EXPECT_DOUBLE_EQ(*model->Probability(a, "b"), 0.6);
  EXPECT_DOUBLE_EQ(*model->Probability(b, "a"), 0.5);
  EXPECT_DOUBLE_EQ(*model->Probability(a, "a"), 0.2);
  const std::vector<std::string> seq = {"a", "b", "a"};
  EXPECT_NEAR(*model->LogProb(seq), std::log(0.5) + std::log(0.6) + std::log(0.5),
              1e-12);
}

TEST(NGram, NormalizationProperty) {
  Rng rng(11);
  const std::vector<std::string> alphabet = {"p", "q", "r", "s", "t"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<std::string>> docs(1 + rng.UniformInt(4));
    for (auto& doc : docs) {
      const int len = 1 + static_cast<int>(rng.UniformInt(12));
      for (int i = 0; i < len; ++i) {
        doc.push_back(alphabet[rng.UniformInt(alphabet.size())]);
      }
    }
    const int order = 1 + static_cast<int>(rng.UniformInt(3));
    const double k = rng.Uniform(0.05, 2.0);
    const auto model = NGramModel::Train(docs, order, k);
    ASSERT_TRUE(model.ok());
    for (int c = 0; c < 10; ++c) {
      std::vector<std::string> ctx;
      for (int i = 0; i < order - 1; ++i) {
        ctx.push_back(rng.Bernoulli(0.1) ? "zz"
                                         : alphabet[rng.UniformInt(alphabet.size())]);
      }
      double total = *model->Probability(ctx, "<never-seen>");
      for (const auto& token : model->vocabulary()) {
        total += *model->Probability(ctx, token);
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(Cosine, HandValues) {
  const std::vector<double> v = {0.3, -2.0, 5.0};
  EXPECT_NEAR(Cosine(v, v), 1.0, 1e-15);
  EXPECT_EQ(Cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
  EXPECT_NEAR(Cosine(std::vector<double>{1, 0}, std::vector<double>{1, 1}),
              0.7071, 1e-4);
  EXPECT_EQ(Cosine(std::vector<double>{0, 0}, std::vector<double>{0, 0}), 0.0);
}

// Dense tf-idf cosine computed directly from counts, independent of the SVD.
double BruteForceTfIdfCosine(const std::vector<std::string>& docs, size_t i,
                             size_t j) {
  std::map<std::string, int> df;
  std::vector<std::map<std::string, int>> tf(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const auto& t : TokenizeWords(docs[d])) ++tf[d][t];
    for (const auto& [t, c] : tf[d]) ++df[t];
  }
  auto weight = [&](size_t d, const std::string& t) {
    const auto it = tf[d].find(t);
    if (it == tf[d].end()) return 0.0;
    return it->second *
           (std::log((docs.size() + 1.0) / (df[t] + 1.0)) + 1.0);
  };
  double dot = 0, ni = 0, nj = 0;
  for (const auto& [t, unused] : df) {
    dot += weight(i, t) * weight(j, t);
    ni += weight(i, t) * weight(i, t);
    nj += weight(j, t) * weight(j, t);
  }
  return dot / std::sqrt(ni * nj);
}

TEST(Embedding, FullRankReproducesDocumentCosines) {
  const std::vector<std::string> docs = {
      "glaciers carve valleys slowly over centuries",
      "rivers carve canyons and valleys",
      "the market sells bread and fresh fish",
      "fresh bread from the market baker"};
  const auto space = EmbeddingSpace::Train(docs, 4, "toy", "2026-01-01");
  ASSERT_TRUE(space.ok());
  EXPECT_EQ(space->metadata().dimension, 4);
  for (size_t i = 0; i < docs.size(); ++i) {
    for (size_t j = 0; j < docs.size(); ++j) {
      const double lsa = Cosine(space->Embed(docs[i]), space->Embed(docs[j]));
      EXPECT_NEAR(lsa, BruteForceTfIdfCosine(docs, i, j), 1e-6)
          << i << "," << j;
    }
  }
}

TEST(Embedding, DimensionAboveDocumentCountIsError) {
  const std::vector<std::string> docs = {"a b", "c d"};
  EXPECT_FALSE(EmbeddingSpace::Train(docs, 3).ok());
  EXPECT_TRUE(EmbeddingSpace::Train(docs, 2).ok());
}

TEST(Embedding, OutOfVocabularyTextIsZeroVector) {
  const std::vector<std::string> docs = {"a b", "c d"};
  const auto space = EmbeddingSpace::Train(docs, 2);
  ASSERT_TRUE(space.ok());
  for (double x : space->Embed("zzz yyy")) EXPECT_EQ(x, 0.0);
  for (const auto& token : {"a", "b", "c", "d"}) {
    ASSERT_NE(space->TermVector(token), nullptr);
    EXPECT_EQ(space->TermVector(token)->size(), 2);
  }
}

TEST(Embedding, ExplicitVectorsAverage) {
  const auto space = EmbeddingSpace::FromTermVectors(
      2, {{"x", {1.0, 0.0}}, {"y", {0.0, 2.0}}});
  ASSERT_TRUE(space.ok());
  EXPECT_THAT(space->Embed("x y unknown"), ElementsAre(0.5, 1.0));
  EXPECT_FALSE(EmbeddingSpace::FromTermVectors(2, {{"x", {1.0}}}).ok());
}

TEST(Corpus, ParsesLinesAndJsonLines) {
  const auto lines = ParseCorpus("first doc\n\nsecond doc\n");
  ASSERT_TRUE(lines.ok());
  ASSERT_EQ(lines->size(), 2);
  EXPECT_EQ((*lines)[1].text, "second doc");
  const auto jsonl =
      ParseCorpus("{\"id\":\"d1\",\"text\":\"alpha\"}\n{\"id\":\"d2\",\"text\":\"beta\"}");
  ASSERT_TRUE(jsonl.ok());
  EXPECT_EQ((*jsonl)[1].id, "d2");
  EXPECT_FALSE(ParseCorpus("{\"id\":1}").ok());
}

}  // namespace
}  // namespace assesskit::text
