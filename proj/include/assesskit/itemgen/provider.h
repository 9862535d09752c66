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

#ifndef ASSESSKIT_ITEMGEN_PROVIDER_H_
#define ASSESSKIT_ITEMGEN_PROVIDER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "assesskit/itemgen/types.h"
#include "assesskit/text/ngram.h"

namespace assesskit::itemgen {

// Text generator. Implementations must tolerate concurrent calls.
class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual std::string id() const = 0;
  virtual absl::StatusOr<std::string> Generate(const std::string& prompt, uint64_t seed,
                                               int max_tokens) const = 0;
  // One log probability per token of Tokenize(text).
  virtual absl::StatusOr<std::vector<double>> TokenLogProbs(std::string_view text) const = 0;
};

// The last line of every prompt the pipeline sends is a task directive,
//   TASK: passage category=<c> topic=<t> words=<min>-<max>
//   TASK: main_idea | title
//   TASK: sentences n=<n>
//   TASK: questions n=<n>
// and the reading passage, when there is one, follows a "PASSAGE:" line.
// Output conventions: passage text; one line for main_idea and title; one
// sentence per line; one {"question", "answer"} JSON object per line.
struct TaskDirective {
  enum class Kind { kPassage, kMainIdea, kTitle, kSentences, kQuestions };
  Kind kind = Kind::kPassage;
  Category category = Category::kExpository;
  std::string topic;
  int min_words = 0;
  int max_words = 0;
  int count = 0;
};

std::string RenderDirective(const TaskDirective& task);
absl::StatusOr<TaskDirective> ParseDirective(std::string_view prompt);

// Prompt for a task about an existing passage.
std::string PassagePrompt(std::string_view instruction, std::string_view passage,
                          const TaskDirective& task);
// The passage embedded in a PassagePrompt, or empty.
std::string_view EmbeddedPassage(std::string_view prompt);

struct MockDocument {
  Category category = Category::kExpository;
  std::string topic;
  std::string text;
};

absl::StatusOr<std::vector<MockDocument>> ParseMockCorpus(std::string_view jsonl);
absl::StatusOr<std::vector<MockDocument>> LoadMockCorpus(const std::string& path);

// Deterministic offline provider. Passages are runs of consecutive corpus
// sentences (topic matches first); log probabilities come from a bigram
// model of the same corpus. Output is a pure function of (prompt, seed).
class MockProvider : public LlmProvider {
 public:
  static absl::StatusOr<std::unique_ptr<MockProvider>> Create(std::vector<MockDocument> corpus,
                                                              int order = 2);

  std::string id() const override { return "mock"; }
  absl::StatusOr<std::string> Generate(const std::string& prompt, uint64_t seed,
                                       int max_tokens) const override;
  absl::StatusOr<std::vector<double>> TokenLogProbs(std::string_view text) const override;

  const text::NGramModel& model() const { return model_; }
  const std::vector<MockDocument>& corpus() const { return corpus_; }

 private:
  MockProvider(std::vector<MockDocument> corpus, text::NGramModel model);

  std::string GeneratePassage(const TaskDirective& task, uint64_t seed) const;
  std::string Summary(std::string_view passage, bool title) const;
  std::string Sentences(std::string_view passage, int n, uint64_t seed) const;
  std::string Questions(std::string_view passage, int n, uint64_t seed) const;

  std::vector<MockDocument> corpus_;
  // sentences_[d] are the sentences of corpus_[d].
  std::vector<std::vector<std::string>> sentences_;
  text::NGramModel model_;
};

// JSON over HTTP: POST <base>/generate {prompt, seed, max_tokens} returns
// {text, token_logprobs}; POST <base>/logprobs {text} returns
// {token_logprobs}. The credential is sent as a bearer token.
class HttpProvider : public LlmProvider {
 public:
  // Reads ASSESSKIT_PROVIDER_URL (required) and ASSESSKIT_PROVIDER_KEY.
  static absl::StatusOr<std::unique_ptr<HttpProvider>> FromEnvironment();
  // base_url is http://host[:port][/prefix]; https is not supported.
  static absl::StatusOr<std::unique_ptr<HttpProvider>> Create(std::string base_url,
                                                              std::string api_key);

  std::string id() const override { return "http:" + host_; }
  absl::StatusOr<std::string> Generate(const std::string& prompt, uint64_t seed,
                                       int max_tokens) const override;
  absl::StatusOr<std::vector<double>> TokenLogProbs(std::string_view text) const override;

 private:
  HttpProvider(std::string host, int port, std::string prefix, std::string api_key)
      : host_(std::move(host)), port_(port), prefix_(std::move(prefix)),
        api_key_(std::move(api_key)) {}
  absl::StatusOr<std::string> Post(const std::string& path, const std::string& body) const;

  std::string host_;
  int port_;
  std::string prefix_;
  std::string api_key_;
};

// Stable 64-bit string hash used to derive seeds.
uint64_t HashString(std::string_view s);

}  // namespace assesskit::itemgen

#endif  // ASSESSKIT_ITEMGEN_PROVIDER_H_
