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

// Reference implementations used only by tests: deliberately naive, written
// from the textbook definitions and sharing no code with the library.

#ifndef ASSESSKIT_TESTS_ORACLES_H_
#define ASSESSKIT_TESTS_ORACLES_H_

#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

namespace assesskit::oracles {

// QWK from an explicit K x K contingency table.
inline double ContingencyQwk(const std::vector<int>& a, const std::vector<int>& b,
                             int min_score, int max_score) {
  const int k = max_score - min_score + 1;
  std::vector<std::vector<double>> observed(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < a.size(); ++i) {
    observed[a[i] - min_score][b[i] - min_score] += 1.0;
  }
  std::vector<double> rows(k, 0.0), cols(k, 0.0);
  double n = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      rows[i] += observed[i][j];
      cols[j] += observed[i][j];
      n += observed[i][j];
    }
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double w = static_cast<double>((i - j) * (i - j)) / ((k - 1) * (k - 1));
      num += w * observed[i][j];
      den += w * rows[i] * cols[j] / n;
    }
  }
  return 1.0 - num / den;
}

// Interventional Shapley values by enumerating all 2^M coalitions against
// each background point, then averaging over the background.
inline std::vector<double> EnumeratedShapley(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x,
    const std::vector<std::vector<double>>& background) {
  const int m = static_cast<int>(x.size());
  // weight[s] = s! (m-s-1)! / m!
  std::vector<double> weight(m, 0.0);
  for (int s = 0; s < m; ++s) {
    weight[s] = std::exp(std::lgamma(s + 1.0) + std::lgamma(m - s + 0.0) -
                         std::lgamma(m + 1.0));
  }
  std::vector<double> phi(m, 0.0);
  const unsigned long coalitions = 1ul << m;
  std::vector<double> value(coalitions);
  std::vector<double> point(m);
  for (const auto& z : background) {
    for (unsigned long mask = 0; mask < coalitions; ++mask) {
      for (int i = 0; i < m; ++i) point[i] = (mask >> i) & 1ul ? x[i] : z[i];
      value[mask] = f(point);
    }
    for (unsigned long mask = 0; mask < coalitions; ++mask) {
      const int s = __builtin_popcountl(mask);
      for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1ul) continue;
        phi[i] += weight[s] * (value[mask | (1ul << i)] - value[mask]);
      }
    }
  }
  for (double& p : phi) p /= static_cast<double>(background.size());
  return phi;
}

struct CommonRun {
  size_t a_begin, a_end, b_begin, b_end;
  bool operator<(const CommonRun& o) const {
    return std::tie(a_begin, a_end, b_begin, b_end) <
           std::tie(o.a_begin, o.a_end, o.b_begin, o.b_end);
  }
  bool operator==(const CommonRun& o) const {
    return std::tie(a_begin, a_end, b_begin, b_end) ==
           std::tie(o.a_begin, o.a_end, o.b_begin, o.b_end);
  }
};

// Every maximal (non-extendable either way) common substring of a and b of
// length >= min_length, by trying all start pairs.
inline std::vector<CommonRun> MaximalCommonRuns(const std::string& a,
                                                const std::string& b,
                                                size_t min_length) {
  std::vector<CommonRun> runs;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      if (i > 0 && j > 0 && a[i - 1] == b[j - 1]) continue;
      size_t len = 0;
      while (i + len < a.size() && j + len < b.size() && a[i + len] == b[j + len]) ++len;
      if (len >= min_length) runs.push_back({i, i + len, j, j + len});
    }
  }
  return runs;
}

}  // namespace assesskit::oracles

#endif  // ASSESSKIT_TESTS_ORACLES_H_
