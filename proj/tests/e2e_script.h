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


// Scripted generate -> FAB -> IQR -> score -> scan -> adjudicate pipeline,
// run once through the command-line binary and once through the HTTP API.

#ifndef ASSESSKIT_TESTS_E2E_SCRIPT_H_
#define ASSESSKIT_TESTS_E2E_SCRIPT_H_

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/platform/config.h"
#include "assesskit/platform/engine.h"
#include "assesskit/platform/http.h"
#include "httplib.h"
#include "json.hpp"

namespace assesskit::e2e {

using nlohmann::json;

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string Slurp(int fd) {
  std::string s;
  char buf[4096];
  ssize_t n;
  while ((n = ::read(fd, buf, sizeof(buf))) > 0) s.append(buf, static_cast<size_t>(n));
  return s;
}

// Runs argv[0] with the arguments, capturing both output streams.
inline ProcessResult RunProcess(const std::vector<std::string>& argv) {
  ProcessResult result;
  char out_tmpl[] = "/tmp/assesskit-out-XXXXXX";
  char err_tmpl[] = "/tmp/assesskit-err-XXXXXX";
  const int out_fd = ::mkstemp(out_tmpl);
  const int err_fd = ::mkstemp(err_tmpl);
  const pid_t pid = ::fork();
  if (pid == 0) {
    ::dup2(out_fd, 1);
    ::dup2(err_fd, 2);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execv(args[0], args.data());
    ::_exit(127);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  ::lseek(out_fd, 0, SEEK_SET);
  ::lseek(err_fd, 0, SEEK_SET);
  result.out = Slurp(out_fd);
  result.err = Slurp(err_fd);
  ::close(out_fd);
  ::close(err_fd);
  ::unlink(out_tmpl);
  ::unlink(err_tmpl);
  return result;
}

// One operation in both spellings.
struct Op {
  std::vector<std::string> cli;
  std::string method;  // GET or POST
  std::string path;
  json body = json::object();
  std::string actor;  // reviewer header
};

class Driver {
 public:
  virtual ~Driver() = default;
  virtual absl::StatusOr<json> Call(const Op& op) = 0;
};

class CliDriver : public Driver {
 public:
  CliDriver(std::string binary, std::string config_path)
      : binary_(std::move(binary)), config_path_(std::move(config_path)) {}

  absl::StatusOr<json> Call(const Op& op) override {
    std::vector<std::string> argv = {binary_, "--config", config_path_, "--json"};
    argv.insert(argv.end(), op.cli.begin(), op.cli.end());
    ProcessResult r = RunProcess(argv);
    if (r.exit_code != 0) {
      return absl::InternalError(StrCat(Join(op.cli, " "), " exited ", r.exit_code, ": ", r.err));
    }
    json j = json::parse(r.out, nullptr, false);
    if (j.is_discarded()) return absl::InternalError(StrCat("unparsable output: ", r.out));
    return j;
  }

 private:
  std::string binary_;
  std::string config_path_;
};

// Engine and server in this process on an ephemeral port.
class HttpDriver : public Driver {
 public:
  static absl::StatusOr<std::unique_ptr<HttpDriver>> Start(const platform::Config& config) {
    ASSIGN_OR_RETURN(auto engine, platform::Engine::Create(config));
    std::unique_ptr<HttpDriver> d(new HttpDriver);
    d->engine_ = std::move(engine);
    platform::RegisterRoutes(d->server_, *d->engine_);
    d->port_ = d->server_.bind_to_any_port("127.0.0.1");
    if (d->port_ <= 0) return absl::UnavailableError("cannot bind a port");
    d->thread_ = std::thread([s = &d->server_] { s->listen_after_bind(); });
    d->server_.wait_until_ready();
    return d;
  }

  ~HttpDriver() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }
  platform::Engine& engine() { return *engine_; }

  absl::StatusOr<json> Call(const Op& op) override {
    httplib::Client client("127.0.0.1", port_);
    client.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!op.actor.empty()) headers.emplace(platform::kReviewerHeader, op.actor);
    httplib::Result res = op.method == "GET"
                              ? client.Get(op.path, headers)
                              : client.Post(op.path, headers, op.body.dump(), "application/json");
    if (!res) return absl::UnavailableError(StrCat(op.path, ": no response"));
    if (res->status != 200) {
      return absl::InternalError(StrCat(op.path, " -> ", res->status, ": ", res->body));
    }
    json j = json::parse(res->body, nullptr, false);
    if (j.is_discarded()) return absl::InternalError("unparsable body");
    return j;
  }

 private:
  HttpDriver() = default;
  std::unique_ptr<platform::Engine> engine_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

inline void WriteText(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Config text shared by both runs; only the store directory differs.
inline std::string ScriptConfig(const std::string& store_dir) {
  json c = {{"store",
             {{"path", store_dir},
              {"fsync", false},
              {"snapshot_every", 7},
              {"logical_clock", true},
              {"id_seed", 20260101}}}};
  return c.dump(2);
}

struct ScriptOutcome {
  std::string approved_item_entry;
  std::string rejected_item_entry;
  std::string flag_entry;
  json final_approved;
  json final_rejected;
  json final_flag;
  json first_score;
  json second_score;
  json ecp;
};

// The pipeline. `work_dir` receives request files for the CLI.
inline absl::StatusOr<ScriptOutcome> RunScript(Driver& d, const std::string& work_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(work_dir);
  auto file = [&](const std::string& name, const json& j) {
    const std::string path = (fs::path(work_dir) / name).string();
    WriteText(path, j.dump());
    return path;
  };
  ScriptOutcome out;

  // Passages: four expository and one narrative.
  std::vector<std::string> passages;
  const std::vector<std::pair<std::string, std::string>> targets = {
      {"expository", "glaciers"}, {"expository", "volcanoes"}, {"expository", "bees"},
      {"expository", "rivers"},   {"narrative", "trains"}};
  for (size_t i = 0; i < targets.size(); ++i) {
    const auto& [category, topic] = targets[i];
    const int seed = static_cast<int>(11 + i);
    ASSIGN_OR_RETURN(json p, d.Call({{"generate", "passage", "--category", category, "--topic",
                                      topic, "--seed", std::to_string(seed)},
                                     "POST",
                                     "/v1/generate/passage",
                                     {{"category", category}, {"topic", topic}, {"seed", seed}}}));
    passages.push_back(p.at("passage_id").get<std::string>());
  }
  ASSIGN_OR_RETURN(json items, d.Call({{"generate", "items", "--passage", passages[0], "--seed",
                                        "5"},
                                       "POST",
                                       "/v1/generate/items",
                                       {{"passage_id", passages[0]}, {"seed", 5}}}));
  const json& review_ids = items.at("review_ids");
  if (review_ids.size() < 2) return absl::InternalError("fewer than two items generated");
  out.approved_item_entry = review_ids[0].get<std::string>();
  out.rejected_item_entry = review_ids[1].get<std::string>();

  ASSIGN_OR_RETURN(json fab_queue, d.Call({{"review", "list", "--stage", "fab"},
                                           "GET",
                                           "/v1/review/queue?stage=fab",
                                           json::object()}));
  if (fab_queue.at("entries").size() != review_ids.size()) {
    return absl::InternalError("FAB queue does not hold the generated items");
  }

  auto decide = [&](const std::string& id, const std::string& reviewer, const std::string& verdict,
                    std::vector<std::string> reasons, int version) {
    std::vector<std::string> cli = {"review", "decide", id, "--reviewer", reviewer,
                                    "--verdict", verdict, "--version", std::to_string(version)};
    for (const auto& r : reasons) {
      cli.push_back("--reason");
      cli.push_back(r);
    }
    json body = {{"reviewer_id", reviewer},
                 {"verdict", verdict},
                 {"reason_codes", reasons},
                 {"note", ""},
                 {"version", version}};
    return d.Call({cli, "POST", StrCat("/v1/review/", id, "/decision"), body, reviewer});
  };
  RETURN_IF_ERROR(decide(out.approved_item_entry, "fab-ana", "approve", {}, 1).status());
  ASSIGN_OR_RETURN(out.final_approved,
                   decide(out.approved_item_entry, "iqr-ben", "approve", {}, 2));
  ASSIGN_OR_RETURN(out.final_rejected,
                   decide(out.rejected_item_entry, "fab-ana", "reject", {"factual-error"}, 1));

  const json response = {
      {"response_id", "resp-1"},
      {"prompt_text", "Describe how technology has changed the way people communicate."},
      {"text",
       "Technology has changed communication because we can send messages quickly. Many people "
       "use social media to stay in contact with their friends. However, some people spend too "
       "much time on their phones."}};
  ASSIGN_OR_RETURN(out.first_score,
                   d.Call({{"score", "--response", file("response.json", response)},
                           "POST",
                           "/v1/responses/score",
                           response}));

  const json copied = {
      {"response_id", "resp-2"},
      {"session_id", "session-77"},
      {"text",
       "In my view, technology has changed the way we live, work and communicate. Today most "
       "people carry a smartphone that connects them instantly to friends, news and services. "
       "This convenience brings clear advantages, such as faster access to information and new "
       "opportunities for learning."}};
  ASSIGN_OR_RETURN(json flag, d.Call({{"scan", "--response", file("copied.json", copied)},
                                      "POST",
                                      "/v1/responses/scan",
                                      copied}));
  if (!flag.contains("review_id")) return absl::InternalError("copied response was not flagged");
  out.flag_entry = flag["review_id"].get<std::string>();
  ASSIGN_OR_RETURN(out.final_flag,
                   d.Call({{"review", "adjudicate", out.flag_entry, "--proctor", "proctor-cy",
                            "--confirm", "--reason", "other", "--note", "verbatim essay",
                            "--version", "1"},
                           "POST",
                           StrCat("/v1/review/", out.flag_entry, "/adjudicate"),
                           {{"proctor_id", "proctor-cy"},
                            {"confirm", true},
                            {"reason_codes", {"other"}},
                            {"note", "verbatim essay"},
                            {"version", 1}},
                           "proctor-cy"}));

  // Monitoring and a representation audit.
  RETURN_IF_ERROR(d.Call({{"monitor", "baseline", "set", "--week", "1"},
                          "POST",
                          "/v1/monitor/baseline",
                          {{"week", 1}}})
                      .status());
  RETURN_IF_ERROR(
      d.Call({{"monitor", "run", "--week", "3"}, "POST", "/v1/monitor/run", {{"week", 3}}})
          .status());
  json records = json::array();
  const std::vector<std::string> l1s = {"Arabic", "Spanish", "English", "Telugu"};
  for (int i = 0; i < 40; ++i) {
    records.push_back({{"record_id", StrCat("t", i)},
                       {"gender", i % 2 ? "female" : "male"},
                       {"l1", l1s[i % 4]}});
  }
  const json representation = {{"records", records}};
  RETURN_IF_ERROR(d.Call({{"audit", "representation", "--input",
                           file("representation.json", representation)},
                          "POST",
                          "/v1/audit/representation",
                          representation})
                      .status());

  // A second model version, activated through an exam change proposal.
  std::ifstream model_in(platform::DefaultConfig().scoring.model_path);
  std::stringstream model_text;
  model_text << model_in.rdbuf();
  const json model = json::parse(model_text.str(), nullptr, false);
  if (model.is_discarded()) return absl::InternalError("bundled model unreadable");
  RETURN_IF_ERROR(d.Call({{"score", "register", "--model", file("model.json", model), "--version",
                           "v2"},
                          "POST",
                          "/v1/models",
                          {{"version", "v2"}, {"model", model}}})
                      .status());
  ASSIGN_OR_RETURN(json ecp, d.Call({{"ecp", "create", "--description", "activate scorer v2",
                                      "--role", "psychometrics", "--role", "security",
                                      "--model-version", "v2"},
                                     "POST",
                                     "/v1/ecp",
                                     {{"description", "activate scorer v2"},
                                      {"required_roles", {"psychometrics", "security"}},
                                      {"model_version", "v2"}}}));
  const std::string ecp_id = ecp.at("ecp_id").get<std::string>();
  for (const auto& [approver, role] :
       std::vector<std::pair<std::string, std::string>>{{"dana", "psychometrics"},
                                                        {"eli", "security"}}) {
    RETURN_IF_ERROR(d.Call({{"ecp", "approve", ecp_id, "--approver", approver, "--role", role},
                            "POST",
                            StrCat("/v1/ecp/", ecp_id, "/approve"),
                            {{"approver_id", approver}, {"role", role}},
                            approver})
                        .status());
  }
  ASSIGN_OR_RETURN(out.ecp, d.Call({{"ecp", "launch", ecp_id},
                                    "POST",
                                    StrCat("/v1/ecp/", ecp_id, "/launch"),
                                    json::object()}));
  ASSIGN_OR_RETURN(out.second_score,
                   d.Call({{"score", "--response", file("response.json", response)},
                           "POST",
                           "/v1/responses/score",
                           response}));
  return out;
}

inline std::string ReadBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace assesskit::e2e

#endif  // ASSESSKIT_TESTS_E2E_SCRIPT_H_
