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

#include "assesskit/itemgen/provider.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "assesskit/common/random.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/corpus.h"
#include "assesskit/text/tokenizer.h"

namespace assesskit::itemgen {
namespace {

constexpr std::string_view kTaskPrefix = "TASK:";
constexpr std::string_view kPassageMarker = "PASSAGE:\n";

std::vector<std::string> SentenceTexts(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& span : text::SplitSentences(text)) {
    std::string_view s = Trim(text.substr(span.begin, span.length()));
    if (!s.empty()) out.emplace_back(s);
  }
  return out;
}

size_t WordCount(std::string_view text) { return text::Tokenize(text).size(); }

std::string Capitalize(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 32);
  return word;
}

absl::StatusOr<int> ParseInt(std::string_view text) {
  int value = 0;
  if (text.empty() || text.size() > 9) return absl::InvalidArgumentError("bad integer");
  for (char c : text) {
    if (c < '0' || c > '9') return absl::InvalidArgumentError(StrCat("bad integer: ", text));
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return Mix64(h);
}

std::string RenderDirective(const TaskDirective& task) {
  switch (task.kind) {
    case TaskDirective::Kind::kPassage:
      return StrCat(kTaskPrefix, " passage category=", CategoryName(task.category),
                    " words=", task.min_words, "-", task.max_words, " topic=", task.topic);
    case TaskDirective::Kind::kMainIdea:
      return StrCat(kTaskPrefix, " main_idea");
    case TaskDirective::Kind::kTitle:
      return StrCat(kTaskPrefix, " title");
    case TaskDirective::Kind::kSentences:
      return StrCat(kTaskPrefix, " sentences n=", task.count);
    case TaskDirective::Kind::kQuestions:
      return StrCat(kTaskPrefix, " questions n=", task.count);
  }
  return "";
}

absl::StatusOr<TaskDirective> ParseDirective(std::string_view prompt) {
  const size_t at = prompt.rfind(kTaskPrefix);
  if (at == std::string_view::npos || (at > 0 && prompt[at - 1] != '\n')) {
    return absl::InvalidArgumentError("prompt has no TASK directive line");
  }
  std::string_view line = prompt.substr(at + kTaskPrefix.size());
  line = Trim(line.substr(0, line.find('\n')));
  TaskDirective task;
  // topic= takes the rest of the line, so split it off first.
  const size_t topic_at = line.find("topic=");
  if (topic_at != std::string_view::npos) {
    task.topic = std::string(Trim(line.substr(topic_at + 6)));
    line = Trim(line.substr(0, topic_at));
  }
  const std::vector<std::string_view> parts = Split(line, ' ');
  const std::string_view kind = parts.empty() ? "" : parts[0];
  if (kind == "passage") {
    task.kind = TaskDirective::Kind::kPassage;
  } else if (kind == "main_idea") {
    task.kind = TaskDirective::Kind::kMainIdea;
  } else if (kind == "title") {
    task.kind = TaskDirective::Kind::kTitle;
  } else if (kind == "sentences") {
    task.kind = TaskDirective::Kind::kSentences;
  } else if (kind == "questions") {
    task.kind = TaskDirective::Kind::kQuestions;
  } else {
    return absl::InvalidArgumentError(StrCat("unknown task \"", kind, "\""));
  }
  for (size_t i = 1; i < parts.size(); ++i) {
    const size_t eq = parts[i].find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = parts[i].substr(0, eq);
    const std::string_view value = parts[i].substr(eq + 1);
    if (key == "category") {
      ASSIGN_OR_RETURN(task.category, ParseCategory(value));
    } else if (key == "n") {
      ASSIGN_OR_RETURN(task.count, ParseInt(value));
    } else if (key == "words") {
      const size_t dash = value.find('-');
      if (dash == std::string_view::npos) return absl::InvalidArgumentError("words=min-max");
      ASSIGN_OR_RETURN(task.min_words, ParseInt(value.substr(0, dash)));
      ASSIGN_OR_RETURN(task.max_words, ParseInt(value.substr(dash + 1)));
    }
  }
  if (task.kind == TaskDirective::Kind::kPassage &&
      (task.min_words <= 0 || task.max_words < task.min_words)) {
    return absl::InvalidArgumentError("passage task needs words=min-max with 0 < min <= max");
  }
  return task;
}

std::string PassagePrompt(std::string_view instruction, std::string_view passage,
                          const TaskDirective& task) {
  return StrCat(instruction, "\n\n", kPassageMarker, passage, "\n\n", RenderDirective(task));
}

std::string_view EmbeddedPassage(std::string_view prompt) {
  const size_t at = prompt.find(kPassageMarker);
  if (at == std::string_view::npos) return {};
  std::string_view rest = prompt.substr(at + kPassageMarker.size());
  const size_t task = rest.rfind(StrCat("\n\n", kTaskPrefix));
  return task == std::string_view::npos ? rest : rest.substr(0, task);
}

absl::StatusOr<std::vector<MockDocument>> ParseMockCorpus(std::string_view jsonl) {
  std::vector<MockDocument> docs;
  size_t line_number = 0;
  for (std::string_view line : Split(jsonl, '\n')) {
    ++line_number;
    line = Trim(line);
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("category") ||
        !j.contains("text") || !j["text"].is_string() || !j["category"].is_string()) {
      return absl::InvalidArgumentError(
          StrCat("mock corpus line ", line_number, ": expected {\"category\", \"text\"}"));
    }
    MockDocument doc;
    ASSIGN_OR_RETURN(doc.category, ParseCategory(j["category"].get<std::string>()));
    doc.topic = j.value("topic", "");
    doc.text = j["text"].get<std::string>();
    docs.push_back(std::move(doc));
  }
  return docs;
}

absl::StatusOr<std::vector<MockDocument>> LoadMockCorpus(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, text::ReadFile(path));
  return ParseMockCorpus(content);
}

MockProvider::MockProvider(std::vector<MockDocument> corpus, text::NGramModel model)
    : corpus_(std::move(corpus)), model_(std::move(model)) {
  for (const auto& doc : corpus_) sentences_.push_back(SentenceTexts(doc.text));
}

absl::StatusOr<std::unique_ptr<MockProvider>> MockProvider::Create(
    std::vector<MockDocument> corpus, int order) {
  if (corpus.empty()) return absl::InvalidArgumentError("mock provider needs a corpus");
  std::vector<std::string> texts;
  for (const auto& doc : corpus) texts.push_back(doc.text);
  ASSIGN_OR_RETURN(text::NGramModel model, text::NGramModel::TrainOnText(texts, order));
  return std::unique_ptr<MockProvider>(new MockProvider(std::move(corpus), std::move(model)));
}

absl::StatusOr<std::string> MockProvider::Generate(const std::string& prompt, uint64_t seed,
                                                   int max_tokens) const {
  ASSIGN_OR_RETURN(TaskDirective task, ParseDirective(prompt));
  const std::string_view passage = EmbeddedPassage(prompt);
  const uint64_t mixed = Mix64(seed ^ HashString(passage));
  switch (task.kind) {
    case TaskDirective::Kind::kPassage: {
      if (max_tokens > 0) task.max_words = std::min(task.max_words, max_tokens);
      task.min_words = std::min(task.min_words, task.max_words);
      return GeneratePassage(task, seed);
    }
    case TaskDirective::Kind::kMainIdea:
      return Summary(passage, false);
    case TaskDirective::Kind::kTitle:
      return Summary(passage, true);
    case TaskDirective::Kind::kSentences:
      return Sentences(passage, task.count, mixed);
    case TaskDirective::Kind::kQuestions:
      return Questions(passage, task.count, mixed);
  }
  return absl::InternalError("unhandled task");
}

absl::StatusOr<std::vector<double>> MockProvider::TokenLogProbs(std::string_view text) const {
  return model_.TokenLogProbs(text::Tokenize(text).tokens);
}

std::string MockProvider::GeneratePassage(const TaskDirective& task, uint64_t seed) const {
  Rng rng(Mix64(seed ^ HashString(StrCat(CategoryName(task.category), "/", task.topic))));
  std::vector<size_t> on_topic, same_category;
  for (size_t d = 0; d < corpus_.size(); ++d) {
    if (corpus_[d].category != task.category || sentences_[d].empty()) continue;
    (corpus_[d].topic == task.topic ? on_topic : same_category).push_back(d);
  }
  rng.Shuffle(on_topic);
  rng.Shuffle(same_category);
  std::vector<size_t> order = on_topic;
  order.insert(order.end(), same_category.begin(), same_category.end());
  if (order.empty()) {
    for (size_t d = 0; d < corpus_.size(); ++d) {
      if (!sentences_[d].empty()) order.push_back(d);
    }
  }
  if (order.empty()) return "";
  const size_t target =
      static_cast<size_t>(task.min_words) + rng.UniformInt(task.max_words - task.min_words + 1);
  size_t total_sentences = 0;
  for (size_t d : order) total_sentences += sentences_[d].size();

  std::string out;
  size_t words = 0;
  size_t doc = 0;
  size_t sentence = rng.UniformInt(sentences_[order[0]].size());
  for (size_t used = 0; used < total_sentences && words < target; ++used) {
    const std::string& s = sentences_[order[doc]][sentence];
    if (!out.empty()) out += ' ';
    out += s;
    words += WordCount(s);
    if (++sentence == sentences_[order[doc]].size()) {
      sentence = 0;
      doc = (doc + 1) % order.size();
    }
  }
  return out;
}

std::string MockProvider::Summary(std::string_view passage, bool title) const {
  const text::TokenSequence tokens = text::Tokenize(passage);
  std::map<std::string, std::pair<int, size_t>> stats;  // count, first index
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!text::IsContentWord(tokens.tokens[i])) continue;
    auto [it, inserted] = stats.try_emplace(tokens.tokens[i], 0, i);
    ++it->second.first;
  }
  std::vector<std::pair<std::string, std::pair<int, size_t>>> ranked(stats.begin(), stats.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  std::vector<std::string> words;
  for (size_t i = 0; i < ranked.size() && i < 3; ++i) words.push_back(ranked[i].first);
  if (words.empty()) return title ? "Untitled" : "The passage has no clear topic.";
  if (title) {
    return words.size() == 1 ? Capitalize(words[0])
                             : StrCat(Capitalize(words[0]), " and ", Capitalize(words[1]));
  }
  std::string list = words[0];
  for (size_t i = 1; i < words.size(); ++i) {
    list += (i + 1 == words.size() ? " and " : ", ") + words[i];
  }
  return StrCat("The passage is mainly about ", list, ".");
}

std::string MockProvider::Sentences(std::string_view passage, int n, uint64_t seed) const {
  std::vector<const std::string*> pool;
  std::set<std::string_view> seen;
  for (const auto& doc : sentences_) {
    for (const auto& s : doc) {
      if (passage.find(s) == std::string_view::npos && seen.insert(s).second) pool.push_back(&s);
    }
  }
  Rng rng(seed);
  std::string out;
  const size_t k = std::min(pool.size(), static_cast<size_t>(std::max(n, 0)));
  for (size_t i : rng.SampleWithoutReplacement(pool.size(), k)) {
    if (!out.empty()) out += '\n';
    out += *pool[i];
  }
  return out;
}

std::string MockProvider::Questions(std::string_view passage, int n, uint64_t seed) const {
  const std::vector<text::CharSpan> sentences = text::SplitSentences(passage);
  if (sentences.empty()) return "";
  Rng rng(seed);
  std::string out;
  for (int i = 0; i < n; ++i) {
    const text::CharSpan sentence = sentences[rng.UniformInt(sentences.size())];
    const std::string_view s = passage.substr(sentence.begin, sentence.length());
    const text::TokenSequence tokens = text::Tokenize(s);
    std::vector<size_t> content;
    for (size_t t = 0; t < tokens.size(); ++t) {
      if (text::IsContentWord(tokens.tokens[t])) content.push_back(t);
    }
    if (content.empty()) continue;
    const size_t t = content[rng.UniformInt(content.size())];
    // The answer runs from the chosen word to the end of its clause.
    size_t end = s.find_first_of(",;.!?", tokens.spans[t].end);
    if (end == std::string_view::npos) end = s.size();
    std::string answer(s.substr(tokens.spans[t].begin, end - tokens.spans[t].begin));
    // Some candidates paraphrase instead of quoting, as real models do.
    if (rng.Bernoulli(0.2)) answer = StrCat("It says that ", answer);
    const nlohmann::json line = {
        {"question", StrCat("Highlight the words that tell you about \"", tokens.tokens[t],
                            "\" in the passage.")},
        {"answer", answer}};
    if (!out.empty()) out += '\n';
    out += line.dump();
  }
  return out;
}

}  // namespace assesskit::itemgen
