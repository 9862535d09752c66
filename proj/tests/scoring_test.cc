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
#include <filesystem>
#include <numeric>

#include "assesskit/common/random.h"
#include "assesskit/features/extractors.h"
#include "assesskit/features/grammar.h"
#include "assesskit/scoring/agreement.h"
#include "assesskit/scoring/band.h"
#include "assesskit/scoring/gbt.h"
#include "assesskit/scoring/model_io.h"
#include "assesskit/scoring/ratings.h"
#include "assesskit/scoring/shap.h"
#include "fixtures.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace assesskit::scoring {
namespace {

using ::testing::HasSubstr;
using features::Subconstruct;

TEST(BandTest, Examples) {
  EXPECT_EQ(ToBand(3.49)->score, 3);
  EXPECT_EQ(ToBand(3.49)->cefr, "B1");
  EXPECT_EQ(ToBand(0.2)->score, 1);
  EXPECT_EQ(ToBand(0.2)->cefr, "A1");
  EXPECT_EQ(ToBand(4.5)->score, 5);
  EXPECT_EQ(ToBand(4.5)->cefr, "C1");
  EXPECT_EQ(ToBand(9.0)->cefr, "C2");
  EXPECT_FALSE(ToBand(std::nan("")).ok());
  EXPECT_FALSE(ToBand(INFINITY).ok());
}

TEST(AgreementTest, PerfectAgreement) {
  const std::vector<int> a = {1, 2, 3, 4, 5, 6, 3};
  AgreementReport r = PairedAgreement(a, a);
  EXPECT_DOUBLE_EQ(r.exact_agreement, 1.0);
  EXPECT_DOUBLE_EQ(r.adjacent_agreement, 1.0);
  ASSERT_EQ(r.qwk_status, KappaStatus::kDefined);
  EXPECT_DOUBLE_EQ(*r.quadratic_weighted_kappa, 1.0);
  EXPECT_DOUBLE_EQ(*r.pearson_r, 1.0);
  EXPECT_EQ(r.n_pairs, 7);
}

TEST(AgreementTest, ReversedRatingsHandTable) {
  // Observed cells (1,4),(2,3),(3,2),(4,1) weigh 9+1+1+9 = 20 (over 25).
  // Expected cells are 1/4 each over the 4x4 block: sum (i-j)^2 = 40, so
  // sum wE = 40/4 = 10 (over 25). kappa = 1 - 20/10 = -1.
  const std::vector<int> a = {1, 2, 3, 4};
  const std::vector<int> b = {4, 3, 2, 1};
  auto qwk = QuadraticWeightedKappa(a, b);
  ASSERT_TRUE(qwk.has_value());
  EXPECT_NEAR(*qwk, -1.0, 1e-12);
  EXPECT_NEAR(*qwk, oracles::ContingencyQwk(a, b, 1, 6), 1e-12);
  AgreementReport r = PairedAgreement(a, b);
  EXPECT_DOUBLE_EQ(r.exact_agreement, 0.0);
  EXPECT_DOUBLE_EQ(r.adjacent_agreement, 0.5);
}

TEST(AgreementTest, ConstantRaterIsUndefined) {
  const std::vector<int> a = {3, 3, 3, 3};
  const std::vector<int> b = {1, 2, 4, 5};
  AgreementReport r = PairedAgreement(a, b);
  EXPECT_EQ(r.qwk_status, KappaStatus::kUndefined);
  EXPECT_FALSE(r.quadratic_weighted_kappa.has_value());
  EXPECT_FALSE(r.pearson_r.has_value());
  EXPECT_DOUBLE_EQ(r.exact_agreement, 0.0);
  EXPECT_DOUBLE_EQ(r.adjacent_agreement, 0.5);
}

TEST(AgreementTest, QwkMatchesContingencyOracle) {
  Rng rng(7);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng.UniformInt(60);
    std::vector<int> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = 1 + static_cast<int>(rng.UniformInt(6));
      b[i] = rng.Bernoulli(0.5) ? a[i] : 1 + static_cast<int>(rng.UniformInt(6));
    }
    auto qwk = QuadraticWeightedKappa(a, b);
    const bool a_constant = std::adjacent_find(a.begin(), a.end(), std::not_equal_to<>()) == a.end();
    const bool b_constant = std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) == b.end();
    if (a_constant || b_constant) {
      EXPECT_FALSE(qwk.has_value());
      continue;
    }
    ASSERT_TRUE(qwk.has_value());
    EXPECT_NEAR(*qwk, oracles::ContingencyQwk(a, b, 1, 6), 1e-12);
    EXPECT_GE(*qwk, -1.0);
    EXPECT_LE(*qwk, 1.0);
    ++compared;
  }
  EXPECT_GT(compared, 190);
}

TEST(AgreementTest, AdjacentNeverBelowExact) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> a(10), b(10);
    for (int i = 0; i < 10; ++i) {
      a[i] = 1 + static_cast<int>(rng.UniformInt(6));
      b[i] = 1 + static_cast<int>(rng.UniformInt(6));
    }
    AgreementReport r = PairedAgreement(a, b);
    EXPECT_GE(r.adjacent_agreement, r.exact_agreement);
  }
}

TEST(AgreementTest, RaterAgreementPairsByRaterId) {
  std::map<std::string, std::vector<RaterScore>> grouped;
  grouped["r1"] = {{"bob", 3}, {"amy", 4}};
  grouped["r2"] = {{"amy", 2}, {"bob", 2}};
  grouped["r3"] = {{"amy", 5}};
  AgreementReport r = RaterAgreement(grouped);
  EXPECT_EQ(r.n_pairs, 2);
  EXPECT_DOUBLE_EQ(r.exact_agreement, 0.5);
  EXPECT_DOUBLE_EQ(r.adjacent_agreement, 1.0);
}

TEST(RatingsTest, ConsensusIsMean) {
  auto ratings = ParseRatings(
      R"({"response_id":"a","rater_id":"r1","score":3}
{"response_id":"a","rater_id":"r2","score":3}
{"response_id":"b","rater_id":"r1","score":2}
{"response_id":"b","rater_id":"r2","score":4}

{"response_id":"c","rater_id":"r1","score":5}
)");
  ASSERT_TRUE(ratings.ok()) << ratings.status();
  ConsensusResult c = Consensus(*ratings, 2);
  EXPECT_DOUBLE_EQ(c.consensus.at("a"), 3.0);
  EXPECT_DOUBLE_EQ(c.consensus.at("b"), 3.0);
  EXPECT_FALSE(c.consensus.contains("c"));
  ASSERT_EQ(c.rejected.size(), 1u);
  EXPECT_EQ(c.rejected[0].response_id, "c");
  EXPECT_THAT(c.rejected[0].reason, HasSubstr("needs 2"));
}

TEST(RatingsTest, OutOfRangeScoreNamesLine) {
  auto ratings = ParseRatings(
      R"({"response_id":"a","rater_id":"r1","score":3}
{"response_id":"x9","rater_id":"r2","score":7}
)");
  ASSERT_FALSE(ratings.ok());
  EXPECT_THAT(ratings.status().message(), HasSubstr("line 2"));
  EXPECT_THAT(ratings.status().message(), HasSubstr("x9"));
  EXPECT_FALSE(ParseRatings(R"({"response_id":"a","rater_id":"r1","score":2.5})").ok());
  EXPECT_FALSE(ParseRatings(R"({"response_id":"a","score":2})").ok());
  EXPECT_FALSE(ParseRatings("not json").ok());
}

TEST(RatingsTest, ParseResponsesWithDemographics) {
  auto responses = ParseResponses(
      R"({"response_id":"a","prompt_id":"p","text":"Hi.","prep_seconds":20,"write_seconds":250,"demographics":{"gender":"female","l1":"Telugu"}}
{"response_id":"b","prompt_id":"p","text":""}
)");
  ASSERT_TRUE(responses.ok()) << responses.status();
  ASSERT_EQ(responses->size(), 2u);
  EXPECT_EQ((*responses)[0].write_seconds, 250);
  ASSERT_TRUE((*responses)[0].demographics.has_value());
  EXPECT_EQ((*responses)[0].demographics->l1, "Telugu");
  EXPECT_FALSE((*responses)[1].demographics.has_value());
  EXPECT_FALSE(ParseResponses(R"({"response_id":"a","prompt_id":"p","text":"x","write_seconds":-1})").ok());
}

std::vector<SchemaEntry> SingleFeatureSchema() {
  return {{"f0", Subconstruct::kContent}};
}

TEST(GbtTest, ConstantLabelsGiveConstantModel) {
  TrainingData data;
  data.schema = {{"f0", Subconstruct::kContent}, {"f1", Subconstruct::kLexis}};
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    data.rows.push_back({rng.Uniform(), rng.Uniform()});
    data.labels.push_back(4.0);
  }
  auto result = TrainScorer(data, TrainParams{});
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_TRUE(result->report.degenerate);
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> x = {rng.Uniform(-5, 5), rng.Uniform(-5, 5)};
    EXPECT_DOUBLE_EQ(result->scorer.ensemble.Predict(x), 4.0);
  }
}

TEST(GbtTest, BinaryFeatureMatchesHandFitSequence) {
  // Labels 2 (x=0) and 5 (x=1). Base 3.5; every depth-1 tree splits at 0.5
  // with leaves equal to the current residuals -/+1.5 (1-lr)^t, so after T
  // trees the residual is 1.5 (1-lr)^T.
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  for (int i = 0; i < 20; ++i) {
    rows.push_back({static_cast<double>(i % 2)});
    labels.push_back(i % 2 ? 5.0 : 2.0);
  }
  TrainParams params;
  params.num_trees = 40;
  params.max_depth = 1;
  params.learning_rate = 0.1;
  params.min_leaf_size = 1;
  auto ensemble = FitEnsemble(rows, labels, params);
  ASSERT_TRUE(ensemble.ok()) << ensemble.status();
  ASSERT_EQ(ensemble->trees.size(), 40u);
  EXPECT_DOUBLE_EQ(ensemble->trees[0].nodes[0].threshold, 0.5);
  const double residual = 1.5 * std::pow(0.9, 40);
  EXPECT_NEAR(ensemble->Predict(std::vector<double>{0.0}), 2.0 + residual, 1e-9);
  EXPECT_NEAR(ensemble->Predict(std::vector<double>{1.0}), 5.0 - residual, 1e-9);
  EXPECT_LT(residual, 0.1);
}

TEST(GbtTest, SameSeedSameEnsemble) {
  TrainingData data;
  data.schema = {{"a", Subconstruct::kContent}, {"b", Subconstruct::kGrammar},
                 {"c", Subconstruct::kLexis}};
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> row = {rng.Uniform(), rng.Uniform(), rng.Uniform()};
    data.labels.push_back(1 + 5 * row[0] + 0.3 * rng.Normal());
    data.rows.push_back(std::move(row));
  }
  TrainParams params;
  params.num_trees = 30;
  auto first = TrainScorer(data, params);
  auto second = TrainScorer(data, params);
  ASSERT_TRUE(first.ok());
  ASSERT_TRUE(second.ok());
  EXPECT_EQ(first->scorer, second->scorer);
  EXPECT_EQ(first->report.n_holdout, 60);
  params.seed = 43;
  auto third = TrainScorer(data, params);
  EXPECT_NE(first->scorer.background, third->scorer.background);
}

TEST(GbtTest, MonotoneLabelHoldoutQwk) {
  TrainingData data;
  data.schema = {{"signal", Subconstruct::kLexis}, {"noise", Subconstruct::kGrammar}};
  Rng rng(99);
  for (int i = 0; i < 600; ++i) {
    const double s = rng.Uniform();
    data.rows.push_back({s, rng.Uniform()});
    data.labels.push_back(1.0 + 5.0 * s * s + 0.15 * rng.Normal());
  }
  auto result = TrainScorer(data, TrainParams{});
  ASSERT_TRUE(result.ok());
  ASSERT_TRUE(result->report.holdout_qwk.has_value());
  EXPECT_GE(*result->report.holdout_qwk, 0.8);
  EXPECT_GT(*result->report.holdout_pearson, 0.9);
  EXPECT_FALSE(result->report.degenerate);
}

TEST(GbtTest, RejectsBadInput) {
  TrainingData data;
  data.schema = SingleFeatureSchema();
  EXPECT_FALSE(TrainScorer(data, TrainParams{}).ok());
  data.rows = {{1.0}, {2.0, 3.0}};
  data.labels = {1.0, 2.0};
  EXPECT_FALSE(TrainScorer(data, TrainParams{}).ok());
  data.rows = {{1.0}, {2.0}};
  TrainParams bad;
  bad.learning_rate = 0.0;
  EXPECT_FALSE(TrainScorer(data, bad).ok());
}

Ensemble HandEnsemble() {
  // t0: x0 < 0.5 ? -1 : 2
  // t1: x1 < 1.0 ? (x0 < 0.25 ? 0.5 : 1.5) : -0.5
  // t2: leaf 0.25
  Ensemble e;
  e.base_score = 3.0;
  e.learning_rate = 0.5;
  e.trees.push_back({{{0, 0.5, 1, 2, 0.0}, {-1, 0, -1, -1, -1.0}, {-1, 0, -1, -1, 2.0}}});
  e.trees.push_back({{{1, 1.0, 1, 2, 0.0},
                      {0, 0.25, 3, 4, 0.0},
                      {-1, 0, -1, -1, -0.5},
                      {-1, 0, -1, -1, 0.5},
                      {-1, 0, -1, -1, 1.5}}});
  e.trees.push_back({{{-1, 0, -1, -1, 0.25}}});
  return e;
}

TEST(PredictTest, EmptyEnsembleIsBase) {
  Ensemble e;
  e.base_score = 2.75;
  EXPECT_DOUBLE_EQ(e.Predict(std::vector<double>{1.0, 2.0}), 2.75);
}

TEST(PredictTest, SingleStumpLeft) {
  Ensemble e;
  e.base_score = 3.0;
  e.learning_rate = 0.1;
  e.trees.push_back({{{0, 0.5, 1, 2, 0.0}, {-1, 0, -1, -1, -2.0}, {-1, 0, -1, -1, 4.0}}});
  EXPECT_DOUBLE_EQ(e.Predict(std::vector<double>{0.1}), 3.0 + 0.1 * -2.0);
}

TEST(PredictTest, ThreeTreeHandWalk) {
  const Ensemble e = HandEnsemble();
  // x = (0.1, 0.5): t0 -> -1, t1 -> 0.5, t2 -> 0.25; 3 + 0.5 * (-0.25)
  EXPECT_DOUBLE_EQ(e.Predict(std::vector<double>{0.1, 0.5}), 2.875);
  // x = (0.3, 0.5): -1 + 1.5 + 0.25 = 0.75 -> 3.375
  EXPECT_DOUBLE_EQ(e.Predict(std::vector<double>{0.3, 0.5}), 3.375);
  // x = (0.9, 2.0): 2 - 0.5 + 0.25 = 1.75 -> 3.875
  EXPECT_DOUBLE_EQ(e.Predict(std::vector<double>{0.9, 2.0}), 3.875);
}

TEST(PredictTest, SchemaMismatch) {
  TrainedScorer scorer;
  scorer.schema = {{"a", Subconstruct::kContent}, {"b", Subconstruct::kLexis}};
  features::FeatureVector fv;
  fv.Add("a", 1.0, Subconstruct::kContent);
  EXPECT_FALSE(Predict(scorer, fv).ok());
  fv.Add("c", 1.0, Subconstruct::kLexis);
  auto r = Predict(scorer, fv);
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(r.status().message(), HasSubstr("'c'"));
}

TEST(ShapTest, SingleSplitHandValue) {
  Ensemble e;
  e.learning_rate = 1.0;
  e.trees.push_back({{{0, 0.5, 1, 2, 0.0}, {-1, 0, -1, -1, 0.0}, {-1, 0, -1, -1, 1.0}}});
  auto phi = InterventionalShap(e, std::vector<double>{1.0, 7.0},
                                {{0.0, 3.0}, {1.0, 3.0}});
  ASSERT_TRUE(phi.ok());
  // Against z=(0,3) feature 0 moves the output 0 -> 1; against z=(1,3) it
  // does nothing. Mean 0.5; feature 1 is unused.
  EXPECT_DOUBLE_EQ((*phi)[0], 0.5);
  EXPECT_DOUBLE_EQ((*phi)[1], 0.0);
}

TEST(ShapTest, DepthTwoTreeMatchesEnumeration) {
  const Ensemble e = HandEnsemble();
  const std::vector<double> x = {0.1, 0.5};
  const std::vector<std::vector<double>> background = {{0.3, 0.5}, {0.9, 2.0}};
  auto phi = InterventionalShap(e, x, background);
  ASSERT_TRUE(phi.ok());
  auto expected = oracles::EnumeratedShapley(
      [&](const std::vector<double>& p) { return e.Predict(p); }, x, background);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR((*phi)[i], expected[i], 1e-12);
  // Hand check against z=(0.9,2.0), 2^2 coalitions:
  //   v({})=3.875 v({0})=2.375 v({1})=4.875 v({0,1})=2.875
  //   phi0 = ((2.375-3.875) + (2.875-4.875)) / 2 = -1.75
  //   phi1 = ((4.875-3.875) + (2.875-2.375)) / 2 = 0.75
  // Against z=(0.3,0.5): only feature 0 differs, 2.875 - 3.375 = -0.5.
  EXPECT_NEAR((*phi)[0], (-1.75 - 0.5) / 2.0, 1e-12);
  EXPECT_NEAR((*phi)[1], 0.75 / 2.0, 1e-12);
}

TEST(ShapTest, RandomEnsemblesMatchEnumeration) {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + static_cast<int>(rng.UniformInt(8));
    const Ensemble e = fixtures::RandomEnsemble(rng, m, 1 + rng.UniformInt(6),
                                                1 + rng.UniformInt(4));
    const std::vector<double> x = fixtures::RandomPoint(rng, m);
    std::vector<std::vector<double>> background;
    for (size_t b = 0, nb = 1 + rng.UniformInt(8); b < nb; ++b) {
      background.push_back(fixtures::RandomPoint(rng, m));
    }
    auto phi = InterventionalShap(e, x, background);
    ASSERT_TRUE(phi.ok());
    auto expected = oracles::EnumeratedShapley(
        [&](const std::vector<double>& p) { return e.Predict(p); }, x, background);
    double base = 0.0;
    for (const auto& z : background) base += e.Predict(z);
    base /= background.size();
    double sum = base;
    for (int i = 0; i < m; ++i) {
      EXPECT_NEAR((*phi)[i], expected[i], 1e-9) << "trial " << trial;
      sum += (*phi)[i];
    }
    EXPECT_NEAR(sum, e.Predict(x), 1e-9);
  }
}

TEST(ShapTest, FullBundledSchemaMatchesEnumeration) {
  const auto schema_pairs = features::FeatureSchema(features::BundledGrammarRules());
  ASSERT_EQ(schema_pairs.size(), 18u);
  TrainingData data;
  for (const auto& [name, group] : schema_pairs) data.schema.push_back({name, group});
  Rng rng(18);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> row(18);
    for (double& v : row) v = rng.Uniform();
    double label = 1.0;
    for (int j = 0; j < 18; ++j) label += (j % 3 == 0 ? 0.5 : 0.1) * row[j];
    data.labels.push_back(label + 0.1 * rng.Normal());
    data.rows.push_back(std::move(row));
  }
  TrainParams params;
  params.num_trees = 20;
  params.background_size = 2;
  auto trained = TrainScorer(data, params);
  ASSERT_TRUE(trained.ok());
  const TrainedScorer& scorer = trained->scorer;
  features::FeatureVector fv;
  for (size_t j = 0; j < 18; ++j) {
    fv.Add(scorer.schema[j].name, data.rows[0][j], scorer.schema[j].group);
  }
  auto explanation = Explain(scorer, fv);
  ASSERT_TRUE(explanation.ok()) << explanation.status();
  auto expected = oracles::EnumeratedShapley(
      [&](const std::vector<double>& p) { return scorer.ensemble.Predict(p); },
      data.rows[0], scorer.background);
  for (size_t j = 0; j < 18; ++j) {
    EXPECT_NEAR(explanation->contributions[j].second, expected[j], 1e-9);
  }
}

TrainedScorer SmallScorer() {
  TrainingData data;
  data.schema = {{"content", Subconstruct::kContent},
                 {"overlap", Subconstruct::kCoherence},
                 {"a1", Subconstruct::kLexis},
                 {"depth", Subconstruct::kGrammar},
                 {"errors", Subconstruct::kGrammar}};
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> row(5);
    for (double& v : row) v = rng.Uniform();
    data.labels.push_back(1 + 2 * row[0] + row[2] + 2 * row[3] * row[4]);
    data.rows.push_back(std::move(row));
  }
  TrainParams params;
  params.num_trees = 25;
  params.background_size = 16;
  return TrainScorer(data, params)->scorer;
}

features::FeatureVector AsFeatures(const TrainedScorer& scorer,
                                   const std::vector<double>& x) {
  features::FeatureVector fv;
  for (size_t j = 0; j < x.size(); ++j) {
    fv.Add(scorer.schema[j].name, x[j], scorer.schema[j].group);
  }
  return fv;
}

TEST(ShapTest, ExplanationInvariants) {
  const TrainedScorer scorer = SmallScorer();
  Rng rng(81);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x(5);
    for (double& v : x) v = rng.Uniform();
    auto e = Explain(scorer, AsFeatures(scorer, x));
    ASSERT_TRUE(e.ok());
    double sum = e->base_value;
    for (const auto& [name, value] : e->contributions) sum += value;
    EXPECT_NEAR(sum, scorer.ensemble.Predict(x), 1e-6);
    EXPECT_NEAR(e->subconstruct_totals[3],
                e->contributions[3].second + e->contributions[4].second, 1e-12);
    EXPECT_NEAR(std::accumulate(e->subconstruct_totals.begin(),
                                e->subconstruct_totals.end(), 0.0),
                e->prediction - e->base_value, 1e-6);
  }
}

TEST(ShapTest, InputEqualToEveryBackgroundPoint) {
  TrainedScorer scorer = SmallScorer();
  const std::vector<double> x = scorer.background[0];
  scorer.background.assign(4, x);
  auto e = Explain(scorer, AsFeatures(scorer, x));
  ASSERT_TRUE(e.ok());
  for (const auto& [name, value] : e->contributions) EXPECT_DOUBLE_EQ(value, 0.0);
}

TEST(ShapTest, SymmetricFeaturesShareEqually) {
  // f(x) = [x0 >= 0.5] + [x1 >= 0.5]... with an interaction that treats both
  // features alike: leaf 1 only when both are high.
  Ensemble e;
  e.trees.push_back({{{0, 0.5, 1, 2, 0.0},
                      {-1, 0, -1, -1, 0.0},
                      {1, 0.5, 3, 4, 0.0},
                      {-1, 0, -1, -1, 0.0},
                      {-1, 0, -1, -1, 1.0}}});
  auto phi = InterventionalShap(e, std::vector<double>{1.0, 1.0}, {{0.0, 0.0}});
  ASSERT_TRUE(phi.ok());
  EXPECT_DOUBLE_EQ((*phi)[0], (*phi)[1]);
  EXPECT_DOUBLE_EQ((*phi)[0], 0.5);
}

TEST(ShapTest, EmptyBackgroundIsError) {
  TrainedScorer scorer = SmallScorer();
  scorer.background.clear();
  EXPECT_FALSE(Explain(scorer, AsFeatures(scorer, {0, 0, 0, 0, 0})).ok());
}

TEST(AggregateTest, Examples) {
  ScoreExplanation zero;
  zero.contributions = {{"c", 0.0}, {"g", 0.0}};
  std::map<std::string, Subconstruct> grouping = {{"c", Subconstruct::kContent},
                                                  {"g", Subconstruct::kGrammar},
                                                  {"l", Subconstruct::kLexis}};
  auto totals = AggregateSubconstructs(zero, grouping);
  ASSERT_TRUE(totals.ok());
  EXPECT_THAT(*totals, ::testing::ElementsAre(0.0, 0.0, 0.0, 0.0));

  ScoreExplanation single;
  single.contributions = {{"c", 0.7}, {"g", 0.0}};
  EXPECT_THAT(*AggregateSubconstructs(single, grouping),
              ::testing::ElementsAre(0.7, 0.0, 0.0, 0.0));

  ScoreExplanation toy;
  toy.contributions = {{"c", 0.25}, {"g", -0.5}, {"l", 1.0}};
  grouping["g2"] = Subconstruct::kGrammar;
  toy.contributions.push_back({"g2", 0.125});
  EXPECT_THAT(*AggregateSubconstructs(toy, grouping),
              ::testing::ElementsAre(0.25, 0.0, 1.0, -0.375));

  toy.contributions.push_back({"orphan", 1.0});
  EXPECT_FALSE(AggregateSubconstructs(toy, grouping).ok());
}

TEST(ModelIoTest, RoundTripIsBitExact) {
  const TrainedScorer scorer = SmallScorer();
  const std::string text = SerializeScorer(scorer);
  auto parsed = ParseScorer(text);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, scorer);
  EXPECT_EQ(SerializeScorer(*parsed), text);

  const std::string path =
      (std::filesystem::temp_directory_path() / "assesskit_model_io_test.json").string();
  ASSERT_TRUE(SaveScorer(scorer, path).ok());
  auto loaded = LoadScorer(path);
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(*loaded, scorer);
  std::filesystem::remove(path);
}

TEST(ModelIoTest, RejectsMalformedDocuments) {
  EXPECT_FALSE(ParseScorer("{}").ok());
  std::string text = SerializeScorer(SmallScorer());
  std::string bad_version = text;
  bad_version.replace(bad_version.find("\"version\": 1"), 12, "\"version\": 9");
  EXPECT_FALSE(ParseScorer(bad_version).ok());
  TrainedScorer cyclic;
  cyclic.schema = {{"a", Subconstruct::kContent}};
  cyclic.ensemble.trees.push_back({{{0, 0.5, 0, 0, 0.0}}});
  EXPECT_FALSE(ParseScorer(SerializeScorer(cyclic)).ok());
}

}  // namespace
}  // namespace assesskit::scoring
