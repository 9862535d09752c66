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

#include "assesskit/scoring/ratings.h"

#include <cmath>

#include "absl/status/status.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/corpus.h"
#include "json.hpp"

namespace assesskit::scoring {
namespace {

using nlohmann::json;

absl::Status LineError(size_t line, std::string_view what) {
  return absl::InvalidArgumentError(StrCat("line ", line, ": ", what));
}

absl::StatusOr<std::string> RequiredString(const json& obj,
                                           const std::string& key, size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    return LineError(line, StrCat("missing string field '", key, "'"));
  }
  std::string value = it->get<std::string>();
  if (value.empty()) return LineError(line, StrCat("empty '", key, "'"));
  return value;
}

template <typename Fn>
absl::Status ForEachJsonLine(std::string_view jsonl, Fn fn) {
  size_t line_no = 0;
  for (std::string_view line : Split(jsonl, '\n')) {
    ++line_no;
    line = Trim(line);
    if (line.empty()) continue;
    json obj = json::parse(line.begin(), line.end(), nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      return LineError(line_no, "not a JSON object");
    }
    RETURN_IF_ERROR(fn(obj, line_no));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<RatingRecord>> ParseRatings(std::string_view jsonl) {
  std::vector<RatingRecord> out;
  RETURN_IF_ERROR(ForEachJsonLine(jsonl, [&](const json& obj, size_t line) {
    RatingRecord r;
    ASSIGN_OR_RETURN(r.response_id, RequiredString(obj, "response_id", line));
    ASSIGN_OR_RETURN(r.rater_id, RequiredString(obj, "rater_id", line));
    auto it = obj.find("score");
    if (it == obj.end() || !it->is_number()) {
      return LineError(line, "missing numeric field 'score'");
    }
    const double score = it->get<double>();
    if (score != std::floor(score) || score < kMinScore || score > kMaxScore) {
      return LineError(line, StrCat("score ", it->dump(), " for response '",
                                    r.response_id, "' is outside 1..6"));
    }
    r.score = static_cast<int>(score);
    out.push_back(std::move(r));
    return absl::OkStatus();
  }));
  return out;
}

absl::StatusOr<std::vector<RatingRecord>> LoadRatings(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, text::ReadFile(path));
  return ParseRatings(content);
}

std::map<std::string, std::vector<RaterScore>> GroupByResponse(
    const std::vector<RatingRecord>& ratings) {
  std::map<std::string, std::vector<RaterScore>> grouped;
  for (const auto& r : ratings) {
    grouped[r.response_id].push_back({r.rater_id, r.score});
  }
  return grouped;
}

ConsensusResult Consensus(const std::vector<RatingRecord>& ratings,
                          int min_raters) {
  ConsensusResult result;
  for (const auto& [response_id, scores] : GroupByResponse(ratings)) {
    if (static_cast<int>(scores.size()) < min_raters) {
      result.rejected.push_back(
          {response_id, StrCat("has ", scores.size(), " rating(s), needs ",
                               min_raters)});
      continue;
    }
    double sum = 0.0;
    for (const auto& s : scores) sum += s.score;
    result.consensus[response_id] = sum / static_cast<double>(scores.size());
  }
  return result;
}

absl::StatusOr<std::vector<features::WritingResponse>> ParseResponses(
    std::string_view jsonl) {
  std::vector<features::WritingResponse> out;
  RETURN_IF_ERROR(ForEachJsonLine(jsonl, [&](const json& obj, size_t line) {
    features::WritingResponse r;
    ASSIGN_OR_RETURN(r.response_id, RequiredString(obj, "response_id", line));
    ASSIGN_OR_RETURN(r.prompt_id, RequiredString(obj, "prompt_id", line));
    auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) {
      return LineError(line, "missing string field 'text'");
    }
    r.text = text->get<std::string>();
    for (auto [key, target] : {std::pair{"prep_seconds", &r.prep_seconds},
                               std::pair{"write_seconds", &r.write_seconds}}) {
      auto it = obj.find(key);
      if (it == obj.end()) continue;
      if (!it->is_number_integer() || it->get<int>() < 0) {
        return LineError(line, StrCat("'", key, "' must be a non-negative integer"));
      }
      *target = it->get<int>();
    }
    auto demo = obj.find("demographics");
    if (demo != obj.end() && !demo->is_null()) {
      if (!demo->is_object()) return LineError(line, "'demographics' must be an object");
      DemographicRecord d;
      ASSIGN_OR_RETURN(d.gender, RequiredString(*demo, "gender", line));
      ASSIGN_OR_RETURN(d.l1, RequiredString(*demo, "l1", line));
      r.demographics = std::move(d);
    }
    out.push_back(std::move(r));
    return absl::OkStatus();
  }));
  return out;
}

absl::StatusOr<std::vector<features::WritingResponse>> LoadResponses(
    const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, text::ReadFile(path));
  return ParseResponses(content);
}

absl::StatusOr<Dataset> BuildDataset(
    const std::vector<features::WritingResponse>& responses,
    const std::map<std::string, std::string>& prompts,
    const ConsensusResult& consensus,
    const features::FeatureResources& resources) {
  Dataset dataset;
  dataset.rejected = consensus.rejected;
  for (const auto& r : responses) {
    auto label = consensus.consensus.find(r.response_id);
    if (label == consensus.consensus.end()) {
      bool already = false;
      for (const auto& rej : consensus.rejected) {
        already |= rej.response_id == r.response_id;
      }
      if (!already) dataset.rejected.push_back({r.response_id, "no ratings"});
      continue;
    }
    auto prompt = prompts.find(r.prompt_id);
    if (prompt == prompts.end()) {
      dataset.rejected.push_back(
          {r.response_id, StrCat("unknown prompt '", r.prompt_id, "'")});
      continue;
    }
    ASSIGN_OR_RETURN(features::FeatureVector fv,
                     features::ExtractAll(prompt->second, r.text, resources));
    dataset.examples.push_back(
        {r.response_id, std::move(fv), label->second, r.demographics});
  }
  return dataset;
}

}  // namespace assesskit::scoring
