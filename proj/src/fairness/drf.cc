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

#include "assesskit/fairness/drf.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "absl/status/status.h"
#include "assesskit/common/strings.h"

namespace assesskit::fairness {

std::string_view DrfStatusName(DrfStatus status) {
  switch (status) {
    case DrfStatus::kOk:
      return "ok";
    case DrfStatus::kInsufficientGroups:
      return "insufficient_groups";
    case DrfStatus::kCollinear:
      return "collinear";
  }
  return "unknown";
}

absl::StatusOr<DrfResult> DrfAnalysis(std::string_view scope,
                                      const std::vector<DrfRecord>& records,
                                      const DrfOptions& options) {
  DrfResult result;
  result.scope = std::string(scope);
  result.n = static_cast<int>(records.size());
  std::vector<const DrfRecord*> rows;
  for (const auto& r : records) {
    if (!std::isfinite(r.machine) || !std::isfinite(r.consensus)) {
      return absl::InvalidArgumentError(
          StrCat("record '", r.record_id, "' has a non-finite value"));
    }
    if (r.group.empty()) {
      return absl::InvalidArgumentError(
          StrCat("record '", r.record_id, "' has no group"));
    }
    rows.push_back(&r);
  }
  // Canonical order so the fit does not depend on input order.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const DrfRecord* a, const DrfRecord* b) {
                     return a->record_id < b->record_id;
                   });
  std::map<std::string, int> group_sizes;
  for (const auto* r : rows) ++group_sizes[r->group];
  if (group_sizes.size() < 2) return result;

  if (options.reference_group.has_value()) {
    if (!group_sizes.contains(*options.reference_group)) {
      return absl::InvalidArgumentError(StrCat(
          "reference group '", *options.reference_group, "' has no records"));
    }
    result.reference_group = *options.reference_group;
  } else {
    int best = -1;
    for (const auto& [g, count] : group_sizes) {
      if (count > best) {
        best = count;
        result.reference_group = g;
      }
    }
  }
  std::vector<std::string> contrasts;
  for (const auto& [g, count] : group_sizes) {
    if (g != result.reference_group) contrasts.push_back(g);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = 2 + static_cast<Eigen::Index>(contrasts.size());
  if (n <= p) {
    result.status = DrfStatus::kCollinear;
    return result;
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = rows[i]->consensus;
    auto it = std::find(contrasts.begin(), contrasts.end(), rows[i]->group);
    if (it != contrasts.end()) x(i, 2 + (it - contrasts.begin())) = 1.0;
    y(i) = rows[i]->machine;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < p) {
    result.status = DrfStatus::kCollinear;
    return result;
  }
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd residual = y - x * beta;
  const double dof = static_cast<double>(n - p);
  const double sigma2 = residual.squaredNorm() / dof;
  const Eigen::MatrixXd xtx_inv =
      (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  boost::math::students_t t_dist(dof);

  result.status = DrfStatus::kOk;
  result.intercept = beta(0);
  result.consensus_slope = beta(1);
  for (size_t k = 0; k < contrasts.size(); ++k) {
    const Eigen::Index j = 2 + static_cast<Eigen::Index>(k);
    GroupCoefficient g;
    g.group = contrasts[k];
    g.coefficient = beta(j);
    g.standard_error = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
    if (g.standard_error > 0.0) {
      const double t = std::abs(g.coefficient) / g.standard_error;
      g.p_value = 2.0 * boost::math::cdf(boost::math::complement(t_dist, t));
    } else {
      // Exact fit: any nonzero offset is certain.
      g.p_value = std::abs(g.coefficient) > 1e-12 ? 0.0 : 1.0;
    }
    g.flagged = std::abs(g.coefficient) > options.coefficient_threshold &&
                g.p_value < options.alpha;
    if (g.flagged) result.flagged_groups.push_back(g.group);
    result.groups.push_back(std::move(g));
  }
  return result;
}

}  // namespace assesskit::fairness
