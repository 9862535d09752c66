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

// assesskit: command-line client of the engine operations.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/features/grammar.h"
#include "assesskit/platform/config.h"
#include "assesskit/platform/engine.h"
#include "assesskit/platform/http.h"
#include "assesskit/scoring/gbt.h"
#include "assesskit/scoring/model_io.h"
#include "assesskit/scoring/ratings.h"
#include "assesskit/text/corpus.h"
#include "json.hpp"

namespace assesskit::platform {
namespace {

using nlohmann::json;
using Action = std::function<absl::StatusOr<json>(Engine*)>;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

absl::StatusOr<json> ReadJsonFile(const std::string& path) {
  auto text = text::ReadFile(path);
  if (!text.ok()) return absl::NotFoundError(StrCat("file not found: ", path));
  json j = json::parse(*text, nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError(StrCat(path, ": not valid JSON"));
  return j;
}

// JSON-lines file as an array of objects.
absl::StatusOr<json> ReadJsonLines(const std::string& path) {
  auto text = text::ReadFile(path);
  if (!text.ok()) return absl::NotFoundError(StrCat("file not found: ", path));
  json rows = json::array();
  int line_number = 0;
  for (std::string_view line : Split(*text, '\n')) {
    ++line_number;
    if (Trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      return absl::InvalidArgumentError(StrCat(path, " line ", line_number, ": not valid JSON"));
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

void PrintHuman(const json& j) {
  if (!j.is_object()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (j.contains("summary") && j["summary"].is_string()) {
    std::cout << j["summary"].get<std::string>();
    if (j.contains("review_ids")) std::cout << "review entries: " << j["review_ids"].dump() << "\n";
    return;
  }
  for (const auto& [key, value] : j.items()) {
    std::cout << key << ":";
    if (value.is_string()) {
      std::cout << " " << value.get<std::string>();
    } else if (value.is_structured() && value.dump().size() > 100) {
      // Long nested values go on their own indented lines.
      std::string block = value.dump(2);
      std::string indented = "\n  ";
      for (char c : block) {
        indented += c;
        if (c == '\n') indented += "  ";
      }
      std::cout << indented;
    } else {
      std::cout << " " << value.dump();
    }
    std::cout << "\n";
  }
}

void PrintError(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  if (auto fields = FieldErrors(status)) {
    for (const auto& [field, message] : fields->items()) {
      std::cerr << "  " << field << ": " << message.get<std::string>() << "\n";
    }
  }
}

absl::StatusOr<json> TrainModel(const std::string& responses_path,
                                const std::string& ratings_path,
                                const std::string& prompts_path, const std::string& out_path,
                                int min_raters, const scoring::TrainParams& params,
                                const Config& config) {
  ASSIGN_OR_RETURN(auto responses, scoring::LoadResponses(responses_path));
  ASSIGN_OR_RETURN(auto ratings, scoring::LoadRatings(ratings_path));
  ASSIGN_OR_RETURN(json prompt_rows, ReadJsonLines(prompts_path));
  std::map<std::string, std::string> prompts;
  for (const auto& p : prompt_rows) {
    if (!p.contains("prompt_id") || !p.contains("text")) {
      return absl::InvalidArgumentError(StrCat(prompts_path, ": need prompt_id and text"));
    }
    prompts[p["prompt_id"].get<std::string>()] = p["text"].get<std::string>();
  }
  // Scoring needs the feature resources only.
  ASSIGN_OR_RETURN(auto resources, LoadResources(config));
  const scoring::ConsensusResult consensus = scoring::Consensus(ratings, min_raters);
  ASSIGN_OR_RETURN(scoring::Dataset dataset,
                   scoring::BuildDataset(responses, prompts, consensus, resources->Features()));
  scoring::TrainingData data;
  for (const auto& [name, group] : features::FeatureSchema(resources->rules)) {
    data.schema.push_back({name, group});
  }
  for (const auto& ex : dataset.examples) {
    data.rows.push_back(ex.features.values());
    data.labels.push_back(ex.consensus);
  }
  ASSIGN_OR_RETURN(scoring::TrainResult result, scoring::TrainScorer(data, params));
  RETURN_IF_ERROR(scoring::SaveScorer(result.scorer, out_path));
  json report = {{"model", out_path},
                 {"n_train", result.report.n_train},
                 {"n_holdout", result.report.n_holdout},
                 {"trees_built", result.report.trees_built},
                 {"degenerate", result.report.degenerate},
                 {"rejected_responses", dataset.rejected.size()}};
  if (result.report.holdout_qwk) report["holdout_qwk"] = *result.report.holdout_qwk;
  if (result.report.holdout_pearson) report["holdout_pearson"] = *result.report.holdout_pearson;
  return report;
}

int Run(int argc, char** argv) {
  CLI::App app{"AssessKit: scoring, item generation, review and monitoring"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string store_path;
  bool json_out = false;
  app.add_option("--config", config_path,
                 StrCat("JSON config file (default: $", kConfigEnv, ")"));
  app.add_option("--store", store_path, "Store directory; overrides the config");
  app.add_flag("--json", json_out, "Machine output: JSON on standard output");

  Action action;
  bool serve = false;
  std::string serve_host;
  int serve_port = 0;
  std::function<absl::StatusOr<json>(const Config&)> offline;

  // generate
  auto* generate = app.add_subcommand("generate", "Generate passages and items");
  generate->require_subcommand(1);
  struct {
    std::string category, topic, passage;
    int64_t seed = 1;
    std::optional<int> min_words, max_words;
    std::vector<std::string> alternatives;
  } gen;
  auto* gen_passage = generate->add_subcommand("passage", "Generate and store one passage");
  gen_passage->add_option("--category", gen.category, "expository or narrative")->required();
  gen_passage->add_option("--topic", gen.topic, "Passage topic")->required();
  gen_passage->add_option("--seed", gen.seed, "Generation seed");
  gen_passage->add_option("--min-words", gen.min_words, "Lower word bound");
  gen_passage->add_option("--max-words", gen.max_words, "Upper word bound");
  gen_passage->callback([&] {
    action = [&](Engine* e) {
      json req = {{"category", gen.category}, {"topic", gen.topic}, {"seed", gen.seed}};
      if (gen.min_words) req["min_words"] = *gen.min_words;
      if (gen.max_words) req["max_words"] = *gen.max_words;
      return e->GeneratePassage(req);
    };
  });
  auto* gen_items = generate->add_subcommand("items", "Build items from a stored passage");
  gen_items->add_option("--passage", gen.passage, "Passage entity id")->required();
  gen_items->add_option("--seed", gen.seed, "Generation seed");
  auto* alt_opt = gen_items->add_option("--alternatives", gen.alternatives,
                                        "Passage ids for choice distractors (default: all)");
  gen_items->callback([&, alt_opt] {
    action = [&, alt_opt](Engine* e) {
      json req = {{"passage_id", gen.passage}, {"seed", gen.seed}};
      if (alt_opt->count() > 0) req["alternatives"] = gen.alternatives;
      return e->GenerateItems(req);
    };
  });

  // review
  auto* review = app.add_subcommand("review", "Review queue and decisions");
  review->require_subcommand(1);
  struct {
    std::string id, state, stage, kind, actor, verdict, note;
    std::vector<std::string> reasons;
    int version = 0;
    bool confirm = false, dismiss = false;
    int64_t from_ms = 0, to_ms = 0;
  } rv;
  auto* rv_list = review->add_subcommand("list", "List review entries");
  rv_list->add_option("--state", rv.state, "Filter by state");
  rv_list->add_option("--stage", rv.stage, "Filter by pending stage (fab or iqr)");
  rv_list->add_option("--kind", rv.kind, "Filter by subject kind");
  rv_list->callback([&] {
    action = [&](Engine* e) {
      json q = json::object();
      if (!rv.state.empty()) q["state"] = rv.state;
      if (!rv.stage.empty()) q["stage"] = rv.stage;
      if (!rv.kind.empty()) q["kind"] = rv.kind;
      return e->ListQueue(q);
    };
  });
  auto* rv_show = review->add_subcommand("show", "Show one review entry");
  rv_show->add_option("id", rv.id, "Entry id")->required();
  rv_show->callback([&] { action = [&](Engine* e) { return e->GetReview(rv.id); }; });
  auto* rv_decide = review->add_subcommand("decide", "Record a FAB or IQR decision");
  rv_decide->add_option("id", rv.id, "Entry id")->required();
  rv_decide->add_option("--reviewer", rv.actor, "Reviewer id")->required();
  rv_decide->add_option("--verdict", rv.verdict, "approve, reject or revise")->required();
  rv_decide->add_option("--reason", rv.reasons, "Reason code (repeatable)");
  rv_decide->add_option("--note", rv.note, "Free-text note");
  rv_decide->add_option("--version", rv.version, "Entry version being decided")->required();
  rv_decide->callback([&] {
    action = [&](Engine* e) {
      return e->Decide(rv.id, {{"reviewer_id", rv.actor},
                               {"verdict", rv.verdict},
                               {"reason_codes", rv.reasons},
                               {"note", rv.note},
                               {"version", rv.version}});
    };
  });
  auto* rv_adj = review->add_subcommand("adjudicate", "Confirm or dismiss a plagiarism flag");
  rv_adj->add_option("id", rv.id, "Entry id")->required();
  rv_adj->add_option("--proctor", rv.actor, "Proctor id")->required();
  auto* confirm_flag = rv_adj->add_flag("--confirm", rv.confirm, "Confirm the flag");
  rv_adj->add_flag("--dismiss", rv.dismiss, "Dismiss the flag")->excludes(confirm_flag);
  rv_adj->add_option("--reason", rv.reasons, "Reason code (repeatable)");
  rv_adj->add_option("--note", rv.note, "Free-text note");
  rv_adj->add_option("--version", rv.version, "Entry version being decided")->required();
  rv_adj->callback([&] {
    if (!rv.confirm && !rv.dismiss) throw CLI::RequiredError("--confirm or --dismiss");
    action = [&](Engine* e) {
      return e->Adjudicate(rv.id, {{"proctor_id", rv.actor},
                                   {"confirm", rv.confirm},
                                   {"reason_codes", rv.reasons},
                                   {"note", rv.note},
                                   {"version", rv.version}});
    };
  });
  auto* rv_feedback = review->add_subcommand("feedback", "Feedback report for a time window");
  rv_feedback->add_option("--from", rv.from_ms, "Window start, ms since epoch")->required();
  rv_feedback->add_option("--to", rv.to_ms, "Window end (exclusive), ms since epoch")->required();
  rv_feedback->callback([&] {
    action = [&](Engine* e) { return e->Feedback({{"from_ms", rv.from_ms}, {"to_ms", rv.to_ms}}); };
  });

  // score
  auto* score = app.add_subcommand("score", "Score a writing response");
  score->require_subcommand(0, 1);
  struct {
    std::string response_file, text, prompt_text, response_id, prompt_id;
    std::string model_file, version;
    std::string responses, ratings, prompts, out;
    int min_raters = 2;
    scoring::TrainParams params;
  } sc;
  score->add_option("--response", sc.response_file,
                    "JSON file {response_id?, prompt_text?, text}");
  auto* score_text = score->add_option("--text", sc.text, "Response text (instead of --response)");
  score->add_option("--prompt-text", sc.prompt_text, "Prompt text");
  score->add_option("--response-id", sc.response_id, "Response id");
  auto* sc_register = score->add_subcommand("register", "Register a trained model version");
  sc_register->add_option("--model", sc.model_file, "Model JSON file")->required();
  sc_register->add_option("--version", sc.version, "Version label")->required();
  sc_register->callback([&] {
    action = [&](Engine* e) -> absl::StatusOr<json> {
      ASSIGN_OR_RETURN(json model, ReadJsonFile(sc.model_file));
      return e->RegisterModel({{"version", sc.version}, {"model", model}});
    };
  });
  auto* sc_train = score->add_subcommand("train", "Train a scoring model from rated responses");
  sc_train->add_option("--responses", sc.responses, "Responses JSON-lines")->required();
  sc_train->add_option("--ratings", sc.ratings, "Ratings JSON-lines")->required();
  sc_train->add_option("--prompts", sc.prompts, "Prompts JSON-lines {prompt_id, text}")
      ->required();
  sc_train->add_option("--out", sc.out, "Output model file")->required();
  sc_train->add_option("--min-raters", sc.min_raters, "Ratings needed per response");
  sc_train->add_option("--trees", sc.params.num_trees, "Number of trees");
  sc_train->add_option("--depth", sc.params.max_depth, "Maximum tree depth");
  sc_train->add_option("--seed", sc.params.seed, "Shuffle seed");
  sc_train->callback([&] {
    offline = [&](const Config& config) {
      return TrainModel(sc.responses, sc.ratings, sc.prompts, sc.out, sc.min_raters, sc.params,
                        config);
    };
  });

  // scan
  auto* scan = app.add_subcommand("scan", "Scan a response for copied text");
  struct {
    std::string response_file, text, response_id, session_id;
  } sn;
  scan->add_option("--response", sn.response_file, "JSON file {response_id?, session_id?, text}");
  auto* scan_text = scan->add_option("--text", sn.text, "Response text (instead of --response)");
  scan->add_option("--response-id", sn.response_id, "Response id");
  scan->add_option("--session", sn.session_id, "Test session id");
  auto* scan_show = scan->add_subcommand("show", "Show a stored flag");
  std::string flag_id;
  scan_show->add_option("id", flag_id, "Flag id")->required();
  scan_show->callback([&] { action = [&](Engine* e) { return e->GetFlag(flag_id); }; });

  // audit
  auto* audit = app.add_subcommand("audit", "Fairness audits");
  audit->require_subcommand(1);
  std::string audit_input;
  for (const char* kind : {"dif", "drf", "representation"}) {
    auto* sub = audit->add_subcommand(kind, StrCat(kind, " audit from a JSON request file"));
    sub->add_option("--input", audit_input, "Request JSON file")->required();
    const std::string k = kind;
    sub->callback([&, k] {
      action = [&, k](Engine* e) -> absl::StatusOr<json> {
        ASSIGN_OR_RETURN(json req, ReadJsonFile(audit_input));
        if (k == "dif") return e->AuditDif(req);
        if (k == "drf") return e->AuditDrf(req);
        return e->AuditRepresentation(req);
      };
    });
  }

  // monitor
  auto* monitor = app.add_subcommand("monitor", "Weekly quality monitoring");
  monitor->require_subcommand(1);
  struct {
    int week = 0;
    std::string sessions, mix;
  } mn;
  auto load_sessions = [&](json& req) -> absl::Status {
    if (mn.sessions.empty()) return absl::OkStatus();
    ASSIGN_OR_RETURN(req["sessions"], ReadJsonLines(mn.sessions));
    return absl::OkStatus();
  };
  auto* mn_run = monitor->add_subcommand("run", "Compute and store one week's report");
  mn_run->add_option("--week", mn.week, "Week number")->required();
  mn_run->add_option("--sessions", mn.sessions, "Sessions JSON-lines (default: config)");
  mn_run->callback([&] {
    action = [&](Engine* e) -> absl::StatusOr<json> {
      json req = {{"week", mn.week}};
      RETURN_IF_ERROR(load_sessions(req));
      return e->MonitorRun(req);
    };
  });
  auto* mn_baseline = monitor->add_subcommand("baseline", "Baseline demographic mix");
  mn_baseline->require_subcommand(1);
  auto* mn_set = mn_baseline->add_subcommand("set", "Store a new baseline");
  auto* week_opt = mn_set->add_option("--week", mn.week, "Take the mix of this week");
  auto* mix_opt = mn_set->add_option("--mix", mn.mix, "Mix JSON file")->excludes(week_opt);
  mn_set->add_option("--sessions", mn.sessions, "Sessions JSON-lines (default: config)");
  mn_set->callback([&, week_opt, mix_opt] {
    if (week_opt->count() == 0 && mix_opt->count() == 0) {
      throw CLI::RequiredError("--week or --mix");
    }
    action = [&, mix_opt](Engine* e) -> absl::StatusOr<json> {
      if (mix_opt->count() > 0) {
        ASSIGN_OR_RETURN(json mix, ReadJsonFile(mn.mix));
        return e->SetBaseline({{"mix", mix}});
      }
      json req = {{"week", mn.week}};
      RETURN_IF_ERROR(load_sessions(req));
      return e->SetBaseline(req);
    };
  });
  auto* mn_report = monitor->add_subcommand("report", "Show the stored report of a week");
  mn_report->add_option("--week", mn.week, "Week number")->required();
  mn_report->callback([&] { action = [&](Engine* e) { return e->MonitorReport(mn.week); }; });

  // ecp
  auto* ecp = app.add_subcommand("ecp", "Exam change proposals");
  ecp->require_subcommand(1);
  struct {
    std::string id, description, model_version, approver, role;
    std::vector<std::string> evidence, roles;
  } ec;
  auto* ec_create = ecp->add_subcommand("create", "Record a proposal");
  ec_create->add_option("--description", ec.description, "What changes")->required();
  ec_create->add_option("--evidence", ec.evidence, "Evidence id (repeatable)");
  ec_create->add_option("--role", ec.roles, "Required approver role (repeatable)")->required();
  ec_create->add_option("--model-version", ec.model_version, "Scorer version it activates");
  ec_create->callback([&] {
    action = [&](Engine* e) {
      json req = {{"description", ec.description},
                  {"evidence", ec.evidence},
                  {"required_roles", ec.roles}};
      if (!ec.model_version.empty()) req["model_version"] = ec.model_version;
      return e->CreateEcp(req);
    };
  });
  auto* ec_show = ecp->add_subcommand("show", "Show a proposal");
  ec_show->add_option("id", ec.id, "Proposal id")->required();
  ec_show->callback([&] { action = [&](Engine* e) { return e->GetEcp(ec.id); }; });
  auto* ec_approve = ecp->add_subcommand("approve", "Approve a proposal in one role");
  ec_approve->add_option("id", ec.id, "Proposal id")->required();
  ec_approve->add_option("--approver", ec.approver, "Approver id")->required();
  ec_approve->add_option("--role", ec.role, "Role approved")->required();
  ec_approve->callback([&] {
    action = [&](Engine* e) {
      return e->ApproveEcp(ec.id, {{"approver_id", ec.approver}, {"role", ec.role}});
    };
  });
  auto* ec_launch = ecp->add_subcommand("launch", "Launch a fully approved proposal");
  ec_launch->add_option("id", ec.id, "Proposal id")->required();
  ec_launch->callback([&] { action = [&](Engine* e) { return e->LaunchEcp(ec.id); }; });

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--host", serve_host, "Bind address (default: config)");
  serve_cmd->add_option("--port", serve_port, "Port (default: config)");
  serve_cmd->callback([&] { serve = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // Bare `score` and `scan` act on a response.
  if (!action && !offline && score->parsed()) {
    if (sc.response_file.empty() && score_text->count() == 0) {
      std::cerr << "score: --response or --text is required\n" << score->help();
      return kExitUsage;
    }
    action = [&](Engine* e) -> absl::StatusOr<json> {
      json req = json::object();
      if (!sc.response_file.empty()) {
        ASSIGN_OR_RETURN(req, ReadJsonFile(sc.response_file));
      } else {
        req["text"] = sc.text;
      }
      if (!sc.prompt_text.empty()) req["prompt_text"] = sc.prompt_text;
      if (!sc.response_id.empty()) req["response_id"] = sc.response_id;
      return e->Score(req);
    };
  }
  if (!action && scan->parsed()) {
    if (sn.response_file.empty() && scan_text->count() == 0) {
      std::cerr << "scan: --response or --text is required\n" << scan->help();
      return kExitUsage;
    }
    action = [&](Engine* e) -> absl::StatusOr<json> {
      json req = json::object();
      if (!sn.response_file.empty()) {
        ASSIGN_OR_RETURN(req, ReadJsonFile(sn.response_file));
      } else {
        req["text"] = sn.text;
      }
      if (!sn.response_id.empty()) req["response_id"] = sn.response_id;
      if (!sn.session_id.empty()) req["session_id"] = sn.session_id;
      return e->Scan(req);
    };
  }

  absl::StatusOr<Config> config = ResolveConfig(config_path);
  if (!config.ok()) {
    PrintError(config.status());
    return kExitDomain;
  }
  if (!store_path.empty()) config->store.path = store_path;

  absl::StatusOr<json> result;
  if (offline) {
    result = offline(*config);
  } else {
    auto engine = Engine::Create(*config);
    if (!engine.ok()) {
      PrintError(engine.status());
      return kExitDomain;
    }
    if (serve) {
      const std::string host = serve_host.empty() ? config->server.host : serve_host;
      const int port = serve_port == 0 ? config->server.port : serve_port;
      std::cerr << "listening on " << host << ":" << port << "\n";
      absl::Status s = Serve(**engine, host, port);
      if (!s.ok()) {
        PrintError(s);
        return kExitDomain;
      }
      return kExitOk;
    }
    result = action(engine->get());
  }
  if (!result.ok()) {
    PrintError(result.status());
    return kExitDomain;
  }
  if (json_out) {
    std::cout << result->dump() << "\n";
  } else {
    PrintHuman(*result);
  }
  return kExitOk;
}

}  // namespace
}  // namespace assesskit::platform

int main(int argc, char** argv) { return assesskit::platform::Run(argc, argv); }
