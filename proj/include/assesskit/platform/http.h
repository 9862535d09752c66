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

#ifndef ASSESSKIT_PLATFORM_HTTP_H_
#define ASSESSKIT_PLATFORM_HTTP_H_

#include <string>

#include "absl/status/status.h"
#include "assesskit/platform/engine.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace assesskit::platform {

// Header naming the acting reviewer, proctor or approver.
inline constexpr char kReviewerHeader[] = "X-Reviewer-Id";

int HttpStatusFor(const absl::Status& status);

// {"error": {"code", "message", "fields"?}}
nlohmann::json ErrorBody(const absl::Status& status);

// Installs every /v1 route on `server`, backed by `engine`.
void RegisterRoutes(httplib::Server& server, Engine& engine);

// Blocks serving on host:port with the configured thread count.
absl::Status Serve(Engine& engine, const std::string& host, int port);

}  // namespace assesskit::platform

#endif  // ASSESSKIT_PLATFORM_HTTP_H_
