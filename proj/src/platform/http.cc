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

#include "assesskit/platform/http.h"

#include <functional>
#include <utility>

#include "assesskit/common/strings.h"
#include "httplib.h"

namespace assesskit::platform {
namespace {

using nlohmann::json;
using Handler = std::function<absl::StatusOr<json>(const httplib::Request&, const json& body)>;

std::string CodeName(absl::StatusCode code) {
  switch (code) {
    case absl::StatusCode::kInvalidArgument:
      return "invalid_argument";
    case absl::StatusCode::kNotFound:
      return "not_found";
    case absl::StatusCode::kAlreadyExists:
      return "already_exists";
    case absl::StatusCode::kFailedPrecondition:
      return "failed_precondition";
    case absl::StatusCode::kAborted:
      return "conflict";
    case absl::StatusCode::kPermissionDenied:
      return "permission_denied";
    case absl::StatusCode::kResourceExhausted:
      return "resource_exhausted";
    case absl::StatusCode::kUnimplemented:
      return "unimplemented";
    case absl::StatusCode::kUnavailable:
      return "unavailable";
    default:
      return "internal";
  }
}

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// The header, when present, names the actor; a body naming someone else is
// refused.
absl::Status ApplyActor(const httplib::Request& req, json& body, const char* field) {
  if (!req.has_header(kReviewerHeader)) return absl::OkStatus();
  const std::string actor = req.get_header_value(kReviewerHeader);
  if (!body.is_object()) return absl::OkStatus();
  if (body.contains(field) && body[field].is_string() && body[field] != actor) {
    return absl::PermissionDeniedError(
        StrCat(kReviewerHeader, " '", actor, "' does not match ", field));
  }
  body[field] = actor;
  return absl::OkStatus();
}

json QueryObject(const httplib::Request& req) {
  json q = json::object();
  for (const auto& [key, value] : req.params) q[key] = value;
  return q;
}

absl::StatusOr<int64_t> QueryInt(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return absl::InvalidArgumentError(StrCat(key, " is required"));
  const std::string v = req.get_param_value(key);
  try {
    size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<int64_t>(n);
  } catch (const std::exception&) {
    return absl::InvalidArgumentError(StrCat(key, " must be an integer"));
  }
}

class Router {
 public:
  Router(httplib::Server& server) : server_(server) {}

  void Get(const std::string& pattern, Handler h) {
    server_.Get(pattern, Wrap(std::move(h), false));
  }
  void Post(const std::string& pattern, Handler h) {
    server_.Post(pattern, Wrap(std::move(h), true));
  }

 private:
  static httplib::Server::Handler Wrap(Handler h, bool has_body) {
    return [h = std::move(h), has_body](const httplib::Request& req, httplib::Response& res) {
      json body = json::object();
      if (has_body && !req.body.empty()) {
        body = json::parse(req.body, nullptr, false);
        if (body.is_discarded()) {
          Reply(res, 400,
                {{"error",
                  {{"code", "invalid_argument"},
                   {"message", "request body is not valid JSON"},
                   {"fields", {{"body", "not valid JSON"}}}}}});
          return;
        }
      }
      absl::StatusOr<json> out;
      try {
        out = h(req, body);
      } catch (const std::exception& e) {
        out = absl::InternalError(e.what());
      }
      if (out.ok()) {
        Reply(res, 200, *out);
      } else {
        Reply(res, HttpStatusFor(out.status()), ErrorBody(out.status()));
      }
    };
  }

  httplib::Server& server_;
};

}  // namespace

int HttpStatusFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 200;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
      return 400;
    case absl::StatusCode::kPermissionDenied:
      return 403;
    case absl::StatusCode::kNotFound:
      return 404;
    case absl::StatusCode::kAlreadyExists:
    case absl::StatusCode::kAborted:
    case absl::StatusCode::kFailedPrecondition:
      return 409;
    case absl::StatusCode::kResourceExhausted:
      return 422;
    case absl::StatusCode::kUnimplemented:
      return 501;
    case absl::StatusCode::kUnavailable:
      return 503;
    default:
      return 500;
  }
}

json ErrorBody(const absl::Status& status) {
  json error = {{"code", CodeName(status.code())}, {"message", std::string(status.message())}};
  if (auto fields = FieldErrors(status)) error["fields"] = *fields;
  return {{"error", error}};
}

void RegisterRoutes(httplib::Server& server, Engine& engine) {
  Router r(server);
  Engine* e = &engine;

  r.Get("/v1/healthz", [e](const auto&, const json&) -> absl::StatusOr<json> {
    return e->Health();
  });

  r.Post("/v1/responses/score",
         [e](const auto&, const json& body) { return e->Score(body); });
  r.Post("/v1/responses/scan", [e](const auto&, const json& body) { return e->Scan(body); });
  r.Get(R"(/v1/flags/([^/]+))",
        [e](const httplib::Request& req, const json&) { return e->GetFlag(req.matches[1]); });

  // Fixed review paths before the id patterns.
  r.Get("/v1/review/queue", [e](const httplib::Request& req, const json&) {
    return e->ListQueue(QueryObject(req));
  });
  r.Post("/v1/review/queue",
         [e](const httplib::Request& req, const json& b) -> absl::StatusOr<json> {
           json body = b;
           if (auto s = ApplyActor(req, body, "reviewer_id"); !s.ok()) return s;
           return e->ClaimNext(body);
         });
  r.Get("/v1/review/feedback",
        [e](const httplib::Request& req, const json&) -> absl::StatusOr<json> {
          auto from = QueryInt(req, "from_ms");
          if (!from.ok()) return from.status();
          auto to = QueryInt(req, "to_ms");
          if (!to.ok()) return to.status();
          return e->Feedback({{"from_ms", *from}, {"to_ms", *to}});
        });
  r.Get(R"(/v1/review/([^/]+))",
        [e](const httplib::Request& req, const json&) { return e->GetReview(req.matches[1]); });
  r.Post(R"(/v1/review/([^/]+)/decision)",
         [e](const httplib::Request& req, const json& b) -> absl::StatusOr<json> {
           json body = b;
           if (auto s = ApplyActor(req, body, "reviewer_id"); !s.ok()) return s;
           return e->Decide(req.matches[1], body);
         });
  r.Post(R"(/v1/review/([^/]+)/adjudicate)",
         [e](const httplib::Request& req, const json& b) -> absl::StatusOr<json> {
           json body = b;
           if (auto s = ApplyActor(req, body, "proctor_id"); !s.ok()) return s;
           return e->Adjudicate(req.matches[1], body);
         });
  r.Post(R"(/v1/review/([^/]+)/release)",
         [e](const httplib::Request& req, const json& b) -> absl::StatusOr<json> {
           json body = b;
           if (auto s = ApplyActor(req, body, "reviewer_id"); !s.ok()) return s;
           return e->Release(req.matches[1], body);
         });

  r.Post("/v1/generate/passage",
         [e](const auto&, const json& body) { return e->GeneratePassage(body); });
  r.Post("/v1/generate/items",
         [e](const auto&, const json& body) { return e->GenerateItems(body); });

  r.Post("/v1/audit/dif", [e](const auto&, const json& body) { return e->AuditDif(body); });
  r.Post("/v1/audit/drf", [e](const auto&, const json& body) { return e->AuditDrf(body); });
  r.Post("/v1/audit/representation",
         [e](const auto&, const json& body) { return e->AuditRepresentation(body); });

  r.Post("/v1/monitor/run", [e](const auto&, const json& body) { return e->MonitorRun(body); });
  r.Post("/v1/monitor/baseline",
         [e](const auto&, const json& body) { return e->SetBaseline(body); });
  r.Get(R"(/v1/monitor/reports/(-?\d+))",
        [e](const httplib::Request& req, const json&) -> absl::StatusOr<json> {
          try {
            return e->MonitorReport(std::stoi(req.matches[1]));
          } catch (const std::exception&) {
            return absl::InvalidArgumentError("week out of range");
          }
        });

  r.Post("/v1/models", [e](const auto&, const json& body) { return e->RegisterModel(body); });
  r.Post("/v1/ecp", [e](const auto&, const json& body) { return e->CreateEcp(body); });
  r.Get(R"(/v1/ecp/([^/]+))",
        [e](const httplib::Request& req, const json&) { return e->GetEcp(req.matches[1]); });
  r.Post(R"(/v1/ecp/([^/]+)/approve)",
         [e](const httplib::Request& req, const json& b) -> absl::StatusOr<json> {
           json body = b;
           if (auto s = ApplyActor(req, body, "approver_id"); !s.ok()) return s;
           return e->ApproveEcp(req.matches[1], body);
         });
  r.Post(R"(/v1/ecp/([^/]+)/launch)",
         [e](const httplib::Request& req, const json&) { return e->LaunchEcp(req.matches[1]); });

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      Reply(res, 404,
            {{"error", {{"code", "not_found"}, {"message", StrCat("no route for ", req.path)}}}});
    }
  });
}

absl::Status Serve(Engine& engine, const std::string& host, int port) {
  httplib::Server server;
  const int threads = engine.config().server.threads;
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  RegisterRoutes(server, engine);
  if (!server.bind_to_port(host, port)) {
    return absl::UnavailableError(StrCat("cannot bind ", host, ":", port));
  }
  if (!server.listen_after_bind()) return absl::InternalError("server stopped with an error");
  return absl::OkStatus();
}

}  // namespace assesskit::platform
