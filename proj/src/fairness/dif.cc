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

#include "assesskit/fairness/dif.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

namespace assesskit::fairness {
namespace {

constexpr int kDeciles = 10;

struct GroupedTable {
  StratumTable table;
  int reference = 0;
  int focal = 0;

  void Add(const GroupedTable& other) {
    table.a += other.table.a;
    table.b += other.table.b;
    table.c += other.table.c;
    table.d += other.table.d;
    reference += other.reference;
    focal += other.focal;
  }
  bool empty() const { return reference + focal == 0; }
  bool both_groups() const { return reference > 0 && focal > 0; }
};

// log(1 + exp(t)) without overflow.
double Softplus(double t) {
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

std::string_view DifStatusName(DifStatus status) {
  switch (status) {
    case DifStatus::kOk:
      return "ok";
    case DifStatus::kInsufficientData:
      return "insufficient_data";
    case DifStatus::kNonConverged:
      return "non_converged";
  }
  return "unknown";
}

std::string_view DifClassName(DifClass c) {
  switch (c) {
    case DifClass::kA:
      return "A";
    case DifClass::kB:
      return "B";
    case DifClass::kC:
      return "C";
  }
  return "?";
}

double ChiSquareSurvival(double statistic, double df) {
  if (!(statistic > 0.0)) return 1.0;
  if (std::isinf(statistic)) return 0.0;
  return boost::math::cdf(
      boost::math::complement(boost::math::chi_squared(df), statistic));
}

DifClass ClassifyDelta(double delta, double p_value,
                       const DifThresholds& thresholds) {
  const double magnitude = std::abs(delta);
  const bool significant = p_value < thresholds.alpha;
  if (!significant || magnitude < thresholds.b_delta) return DifClass::kA;
  if (magnitude > thresholds.c_delta) return DifClass::kC;
  return DifClass::kB;
}

MantelHaenszelResult MantelHaenszel(const std::vector<StratumTable>& tables,
                                    const DifThresholds& thresholds) {
  MantelHaenszelResult result;
  double sum_ad = 0, sum_bc = 0, sum_a = 0, sum_expected = 0, sum_var = 0;
  for (const StratumTable& t : tables) {
    const double n_ref = t.a + t.b;
    const double n_focal = t.c + t.d;
    const double m1 = t.a + t.c;
    const double m0 = t.b + t.d;
    if (n_ref <= 0 || n_focal <= 0 || m1 <= 0 || m0 <= 0) continue;
    const double n = t.n();
    sum_ad += t.a * t.d / n;
    sum_bc += t.b * t.c / n;
    sum_a += t.a;
    sum_expected += n_ref * m1 / n;
    sum_var += n_ref * n_focal * m1 * m0 / (n * n * (n - 1.0));
    ++result.strata_used;
  }
  if (result.strata_used < 2) {
    result.detail = "fewer than two strata with both groups and both outcomes";
    return result;
  }
  if (sum_ad <= 0.0 || sum_bc <= 0.0) {
    result.detail = "common odds ratio is zero or unbounded";
    return result;
  }
  result.status = DifStatus::kOk;
  result.common_odds_ratio = sum_ad / sum_bc;
  result.delta = -2.35 * std::log(result.common_odds_ratio);
  const double corrected =
      std::max(0.0, std::abs(sum_a - sum_expected) - 0.5);
  result.chi_square = corrected * corrected / sum_var;
  result.p_value = ChiSquareSurvival(result.chi_square, 1.0);
  result.classification =
      ClassifyDelta(result.delta, result.p_value, thresholds);
  return result;
}

std::vector<StratumTable> StratifyByTotalScore(
    const std::vector<ItemResponse>& responses) {
  std::vector<const ItemResponse*> sorted;
  for (const auto& r : responses) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ItemResponse* x, const ItemResponse* y) {
                     return x->total_score < y->total_score;
                   });
  const size_t n = sorted.size();
  std::vector<GroupedTable> deciles(kDeciles);
  size_t tie_start = 0;
  for (size_t i = 0; i < n; ++i) {
    if (i > 0 && sorted[i]->total_score != sorted[i - 1]->total_score) {
      tie_start = i;
    }
    const size_t k = std::min<size_t>(kDeciles - 1, kDeciles * tie_start / n);
    GroupedTable& g = deciles[k];
    const ItemResponse& r = *sorted[i];
    if (r.focal) {
      ++g.focal;
      (r.correct ? g.table.c : g.table.d) += 1;
    } else {
      ++g.reference;
      (r.correct ? g.table.a : g.table.b) += 1;
    }
  }
  std::vector<GroupedTable> merged;
  GroupedTable carry;
  for (const GroupedTable& g : deciles) {
    carry.Add(g);
    if (carry.both_groups()) {
      merged.push_back(carry);
      carry = GroupedTable();
    }
  }
  if (!carry.empty()) {
    if (merged.empty()) {
      merged.push_back(carry);
    } else {
      merged.back().Add(carry);
    }
  }
  std::vector<StratumTable> tables;
  for (const auto& g : merged) tables.push_back(g.table);
  return tables;
}

MantelHaenszelResult DifMantelHaenszel(const std::vector<ItemResponse>& responses,
                                       const DifThresholds& thresholds) {
  return MantelHaenszel(StratifyByTotalScore(responses), thresholds);
}

LogisticFit FitLogistic(const std::vector<std::vector<double>>& x,
                        const std::vector<double>& y,
                        const LogisticOptions& options) {
  LogisticFit fit;
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index p = n == 0 ? 0 : static_cast<Eigen::Index>(x[0].size());
  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) design(i, j) = x[i][j];
    target(i) = y[i];
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd hessian(p, p);
  auto evaluate = [&](const Eigen::VectorXd& b, Eigen::VectorXd& gradient) {
    const Eigen::VectorXd eta = design * b;
    Eigen::VectorXd w(n);
    gradient = Eigen::VectorXd::Zero(p);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mu = 1.0 / (1.0 + std::exp(-eta(i)));
      w(i) = mu * (1.0 - mu);
      ll += target(i) * eta(i) - Softplus(eta(i));
      gradient += (target(i) - mu) * design.row(i).transpose();
    }
    hessian = design.transpose() * w.asDiagonal() * design;
    return ll;
  };
  Eigen::VectorXd gradient;
  fit.log_likelihood = evaluate(beta, gradient);
  for (fit.iterations = 1; fit.iterations <= options.max_iterations;
       ++fit.iterations) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
    const Eigen::VectorXd step = ldlt.solve(gradient);
    if (!step.allFinite()) break;
    beta += step;
    fit.log_likelihood = evaluate(beta, gradient);
    if (beta.cwiseAbs().maxCoeff() > options.divergence_bound) break;
    if (step.cwiseAbs().maxCoeff() < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.iterations = std::min(fit.iterations, options.max_iterations);
  fit.coefficients.assign(beta.data(), beta.data() + p);
  const Eigen::MatrixXd covariance =
      hessian.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.standard_errors.push_back(std::sqrt(std::max(0.0, covariance(j, j))));
  }
  return fit;
}

LogisticDifResult DifLogistic(const std::vector<ItemResponse>& responses,
                              const LogisticOptions& options) {
  LogisticDifResult result;
  std::vector<const ItemResponse*> rows;
  for (const auto& r : responses) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ItemResponse* a, const ItemResponse* b) {
                     return a->taker_id < b->taker_id;
                   });
  int focal = 0, correct = 0;
  for (const auto* r : rows) {
    focal += r->focal;
    correct += r->correct;
  }
  const int n = static_cast<int>(rows.size());
  if (focal == 0 || focal == n || correct == 0 || correct == n) {
    result.detail = "both groups and both outcomes are required";
    return result;
  }
  std::vector<std::vector<double>> x0, x1, x2;
  std::vector<double> y;
  for (const auto* r : rows) {
    const double g = r->focal ? 1.0 : 0.0;
    x0.push_back({1.0, r->total_score});
    x1.push_back({1.0, r->total_score, g});
    x2.push_back({1.0, r->total_score, g, g * r->total_score});
    y.push_back(r->correct ? 1.0 : 0.0);
  }
  const LogisticFit f0 = FitLogistic(x0, y, options);
  const LogisticFit f1 = FitLogistic(x1, y, options);
  const LogisticFit f2 = FitLogistic(x2, y, options);
  if (!f0.converged || !f1.converged || !f2.converged) {
    result.status = DifStatus::kNonConverged;
    result.detail = "Newton iteration did not converge (likely separation)";
    return result;
  }
  result.status = DifStatus::kOk;
  result.group_coefficient = f1.coefficients[2];
  result.group_standard_error = f1.standard_errors[2];
  result.lr_uniform_chi_square =
      std::max(0.0, 2.0 * (f1.log_likelihood - f0.log_likelihood));
  result.lr_nonuniform_chi_square =
      std::max(0.0, 2.0 * (f2.log_likelihood - f1.log_likelihood));
  result.lr_uniform_p = ChiSquareSurvival(result.lr_uniform_chi_square, 1.0);
  result.lr_nonuniform_p =
      ChiSquareSurvival(result.lr_nonuniform_chi_square, 1.0);
  return result;
}

}  // namespace assesskit::fairness
