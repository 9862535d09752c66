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

#include "assesskit/text/embedding.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "Eigen/Dense"
#include "Eigen/SVD"
#include "absl/status/status.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::text {

absl::StatusOr<EmbeddingSpace> EmbeddingSpace::Train(
    std::span<const std::string> documents, int dimension,
    std::string corpus_id, std::string trained_on) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("embedding dimension must be >= 1");
  }
  if (static_cast<size_t>(dimension) > documents.size()) {
    return absl::InvalidArgumentError(
        StrCat("embedding dimension ", dimension,
                     " exceeds document count ", documents.size()));
  }
  auto idf = IdfTable::Build(documents);
  if (!idf.ok()) return idf.status();

  std::vector<std::map<std::string, int>> counts(documents.size());
  std::map<std::string, int> term_index;
  for (size_t j = 0; j < documents.size(); ++j) {
    for (const auto& token : TokenizeWords(documents[j])) {
      ++counts[j][token];
      term_index.emplace(token, 0);
    }
  }
  if (term_index.empty()) {
    return absl::InvalidArgumentError("embedding corpus has no tokens");
  }
  int next = 0;
  for (auto& [token, index] : term_index) index = next++;

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(next, documents.size());
  for (size_t j = 0; j < documents.size(); ++j) {
    for (const auto& [token, count] : counts[j]) {
      x(term_index[token], j) = count * idf->Weight(token);
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const Eigen::MatrixXd& u = svd.matrixU();

  EmbeddingSpace space;
  space.metadata_ = {std::move(corpus_id), dimension, std::move(trained_on)};
  space.idf_ = std::move(*idf);
  space.singular_values_.assign(dimension, 0.0);
  const int available = static_cast<int>(sigma.size());
  for (int k = 0; k < dimension && k < available; ++k) {
    space.singular_values_[k] = sigma(k);
  }
  for (const auto& [token, row] : term_index) {
    std::vector<double> vec(dimension, 0.0);
    for (int k = 0; k < dimension && k < available; ++k) {
      vec[k] = u(row, k) * sigma(k);
    }
    space.term_vectors_.emplace(token, std::move(vec));
  }
  return space;
}

absl::StatusOr<EmbeddingSpace> EmbeddingSpace::FromTermVectors(
    int dimension, std::map<std::string, std::vector<double>> vectors) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("embedding dimension must be >= 1");
  }
  EmbeddingSpace space;
  space.metadata_ = {"explicit", dimension, ""};
  space.singular_values_.assign(dimension, 1.0);
  for (auto& [token, vec] : vectors) {
    if (static_cast<int>(vec.size()) != dimension) {
      return absl::InvalidArgumentError(
          StrCat("term vector for '", token, "' has length ",
                       vec.size(), ", expected ", dimension));
    }
    space.term_vectors_.emplace(token, std::move(vec));
  }
  return space;
}

const std::vector<double>* EmbeddingSpace::TermVector(
    std::string_view token) const {
  const auto it = term_vectors_.find(token);
  return it == term_vectors_.end() ? nullptr : &it->second;
}

std::vector<double> EmbeddingSpace::Embed(std::string_view text) const {
  return EmbedTokens(TokenizeWords(text));
}

std::vector<double> EmbeddingSpace::EmbedTokens(
    std::span<const std::string> tokens) const {
  const int d = dimension();
  std::vector<double> out(d, 0.0);
  size_t in_vocabulary = 0;
  for (const auto& token : tokens) {
    const auto* vec = TermVector(token);
    if (vec == nullptr) continue;
    ++in_vocabulary;
    const double weight = idf_.has_value() ? idf_->Weight(token) : 1.0;
    for (int k = 0; k < d; ++k) out[k] += weight * (*vec)[k];
  }
  if (in_vocabulary == 0) return out;
  const double largest = singular_values_.empty() ? 0.0 : singular_values_[0];
  for (int k = 0; k < d; ++k) {
    const double s = singular_values_[k];
    // Directions beyond the numerical rank carry no information.
    out[k] = s > 1e-10 * largest && s > 0.0
                 ? out[k] / s / static_cast<double>(in_vocabulary)
                 : 0.0;
  }
  return out;
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  const size_t n = std::min(u.size(), v.size());
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (size_t i = 0; i < n; ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace assesskit::text
