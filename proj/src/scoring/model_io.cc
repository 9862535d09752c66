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

#include "assesskit/scoring/model_io.h"

#include <cmath>
#include <fstream>

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/corpus.h"
#include "json.hpp"

namespace assesskit::scoring {
namespace {

using nlohmann::json;

constexpr std::string_view kFormatName = "assesskit-scorer";

absl::Status Invalid(std::string_view what) {
  return absl::InvalidArgumentError(StrCat("model: ", what));
}

absl::StatusOr<double> FiniteNumber(const json& j, std::string_view what) {
  if (!j.is_number()) return Invalid(StrCat(what, " is not a number"));
  const double v = j.get<double>();
  if (!std::isfinite(v)) return Invalid(StrCat(what, " is not finite"));
  return v;
}

absl::Status ValidateTree(const RegressionTree& tree, size_t num_features) {
  if (tree.nodes.empty()) return Invalid("tree without nodes");
  const int n = static_cast<int>(tree.nodes.size());
  for (int i = 0; i < n; ++i) {
    const TreeNode& node = tree.nodes[i];
    if (node.is_leaf()) continue;
    if (node.feature >= static_cast<int>(num_features)) {
      return Invalid(StrCat("tree references feature ", node.feature,
                            " outside the schema"));
    }
    // Children after their parent keeps the structure acyclic.
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n) {
      return Invalid(StrCat("node ", i, " has invalid children"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

std::string SerializeScorer(const TrainedScorer& scorer) {
  json doc;
  doc["format"] = kFormatName;
  doc["version"] = kModelFormatVersion;
  json schema = json::array();
  for (const auto& entry : scorer.schema) {
    schema.push_back({{"name", entry.name},
                      {"group", std::string(features::SubconstructName(entry.group))}});
  }
  doc["schema"] = std::move(schema);
  doc["base_score"] = scorer.ensemble.base_score;
  doc["learning_rate"] = scorer.ensemble.learning_rate;
  json trees = json::array();
  for (const auto& tree : scorer.ensemble.trees) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"value", n.value}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  doc["trees"] = std::move(trees);
  doc["background"] = scorer.background;
  return doc.dump(1) + "\n";
}

absl::StatusOr<TrainedScorer> ParseScorer(std::string_view json_text) {
  json doc = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return Invalid("not a JSON object");
  if (doc.value("format", std::string()) != kFormatName) {
    return Invalid("unrecognized format");
  }
  if (!doc.contains("version") || doc["version"] != kModelFormatVersion) {
    return Invalid(StrCat("unsupported version, expected ", kModelFormatVersion));
  }
  TrainedScorer scorer;
  if (!doc["schema"].is_array()) return Invalid("schema missing");
  for (const auto& entry : doc["schema"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("group") || !entry["group"].is_string()) {
      return Invalid("malformed schema entry");
    }
    ASSIGN_OR_RETURN(features::Subconstruct group,
                     features::ParseSubconstruct(entry["group"].get<std::string>()));
    scorer.schema.push_back({entry["name"].get<std::string>(), group});
  }
  ASSIGN_OR_RETURN(scorer.ensemble.base_score,
                   FiniteNumber(doc["base_score"], "base_score"));
  ASSIGN_OR_RETURN(scorer.ensemble.learning_rate,
                   FiniteNumber(doc["learning_rate"], "learning_rate"));
  if (!doc["trees"].is_array()) return Invalid("trees missing");
  for (const auto& nodes : doc["trees"]) {
    if (!nodes.is_array()) return Invalid("tree is not an array");
    RegressionTree tree;
    for (const auto& n : nodes) {
      if (!n.is_object()) return Invalid("node is not an object");
      TreeNode node;
      if (n.contains("feature")) {
        for (const char* key : {"feature", "left", "right"}) {
          if (!n.contains(key) || !n[key].is_number_integer()) {
            return Invalid(StrCat("node field '", key, "' must be an integer"));
          }
        }
        node.feature = n["feature"].get<int>();
        if (node.feature < 0) return Invalid("negative feature index");
        node.left = n["left"].get<int>();
        node.right = n["right"].get<int>();
        ASSIGN_OR_RETURN(node.threshold, FiniteNumber(n.value("threshold", json()),
                                                      "threshold"));
      } else {
        ASSIGN_OR_RETURN(node.value, FiniteNumber(n.value("value", json()), "leaf value"));
      }
      tree.nodes.push_back(node);
    }
    RETURN_IF_ERROR(ValidateTree(tree, scorer.schema.size()));
    scorer.ensemble.trees.push_back(std::move(tree));
  }
  if (!doc["background"].is_array()) return Invalid("background missing");
  for (const auto& row : doc["background"]) {
    if (!row.is_array() || row.size() != scorer.schema.size()) {
      return Invalid("background row width differs from schema");
    }
    std::vector<double> values;
    for (const auto& v : row) {
      ASSIGN_OR_RETURN(double d, FiniteNumber(v, "background value"));
      values.push_back(d);
    }
    scorer.background.push_back(std::move(values));
  }
  return scorer;
}

absl::Status SaveScorer(const TrainedScorer& scorer, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(StrCat("cannot write ", path));
  out << SerializeScorer(scorer);
  out.close();
  if (!out) return absl::UnavailableError(StrCat("write failed for ", path));
  return absl::OkStatus();
}

absl::StatusOr<TrainedScorer> LoadScorer(const std::string& path) {
  ASSIGN_OR_RETURN(std::string content, text::ReadFile(path));
  return ParseScorer(content);
}

}  // namespace assesskit::scoring
