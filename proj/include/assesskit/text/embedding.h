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

#ifndef ASSESSKIT_TEXT_EMBEDDING_H_
#define ASSESSKIT_TEXT_EMBEDDING_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/text/idf.h"

namespace assesskit::text {

struct EmbeddingMetadata {
  std::string corpus_id;
  int dimension = 0;
  // Caller-supplied training date; kept as text so training stays a pure
  // function of its inputs.
  std::string trained_on;
};

// Latent semantic analysis space.
//
// Training builds the tf-idf term-document matrix X (terms x documents),
// takes its thin SVD X = U S V^T and keeps the top-d directions. Term t is
// represented by row t of U_d S_d.
//
// A text q with tf-idf vector x_q is embedded as
//   e(q) = (1/n) * sum_t x_q[t] * termvec(t) / s
// (division by the singular values is element-wise, n is the number of
// in-vocabulary tokens). This equals U_d^T x_q / n, so at full rank the cosine
// of two embedded documents equals the cosine of their tf-idf columns.
class EmbeddingSpace {
 public:
  static absl::StatusOr<EmbeddingSpace> Train(
      std::span<const std::string> documents, int dimension,
      std::string corpus_id = "", std::string trained_on = "");

  // Space with explicit term vectors, unit weights and unit singular values:
  // Embed() is then the plain mean of the term vectors.
  static absl::StatusOr<EmbeddingSpace> FromTermVectors(
      int dimension, std::map<std::string, std::vector<double>> vectors);

  std::vector<double> Embed(std::string_view text) const;
  std::vector<double> EmbedTokens(std::span<const std::string> tokens) const;

  int dimension() const { return metadata_.dimension; }
  const EmbeddingMetadata& metadata() const { return metadata_; }
  const std::vector<double>& singular_values() const { return singular_values_; }
  // nullptr for out-of-vocabulary tokens.
  const std::vector<double>* TermVector(std::string_view token) const;
  size_t vocabulary_size() const { return term_vectors_.size(); }

 private:
  EmbeddingSpace() = default;

  EmbeddingMetadata metadata_;
  std::map<std::string, std::vector<double>, std::less<>> term_vectors_;
  std::optional<IdfTable> idf_;
  std::vector<double> singular_values_;
};

// Cosine similarity; zero when either vector is zero.
double Cosine(std::span<const double> u, std::span<const double> v);

}  // namespace assesskit::text

#endif  // ASSESSKIT_TEXT_EMBEDDING_H_
