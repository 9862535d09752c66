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

#include <cstdlib>
#include <utility>

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/itemgen/provider.h"
#include "httplib.h"

namespace assesskit::itemgen {

absl::StatusOr<std::unique_ptr<HttpProvider>> HttpProvider::FromEnvironment() {
  const char* url = std::getenv("ASSESSKIT_PROVIDER_URL");
  if (url == nullptr || *url == '\0') {
    return absl::FailedPreconditionError("ASSESSKIT_PROVIDER_URL is not set");
  }
  const char* key = std::getenv("ASSESSKIT_PROVIDER_KEY");
  return Create(url, key == nullptr ? "" : key);
}

absl::StatusOr<std::unique_ptr<HttpProvider>> HttpProvider::Create(std::string base_url,
                                                                   std::string api_key) {
  constexpr std::string_view kScheme = "http://";
  if (base_url.rfind("https://", 0) == 0) {
    return absl::UnimplementedError("https provider URLs need a TLS-enabled build");
  }
  if (base_url.rfind(kScheme, 0) != 0) {
    return absl::InvalidArgumentError(StrCat("provider URL must start with http://: ", base_url));
  }
  std::string_view rest = std::string_view(base_url).substr(kScheme.size());
  const size_t slash = rest.find('/');
  std::string prefix = slash == std::string_view::npos ? "" : std::string(rest.substr(slash));
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  std::string_view authority = rest.substr(0, slash);
  int port = 80;
  const size_t colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    port = 0;
    for (char c : authority.substr(colon + 1)) {
      if (c < '0' || c > '9' || port > 65535) {
        return absl::InvalidArgumentError(StrCat("bad port in provider URL: ", base_url));
      }
      port = port * 10 + (c - '0');
    }
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return absl::InvalidArgumentError("provider URL has no host");
  return std::unique_ptr<HttpProvider>(
      new HttpProvider(std::string(authority), port, std::move(prefix), std::move(api_key)));
}

absl::StatusOr<std::string> HttpProvider::Post(const std::string& path,
                                               const std::string& body) const {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(10);
  client.set_read_timeout(120);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = client.Post(prefix_ + path, headers, body, "application/json");
  if (!res) {
    return absl::UnavailableError(
        StrCat("provider request failed: ", httplib::to_string(res.error())));
  }
  if (res->status != 200) {
    return absl::UnavailableError(StrCat("provider returned HTTP ", res->status));
  }
  return res->body;
}

namespace {

absl::StatusOr<std::vector<double>> LogProbsField(const nlohmann::json& j) {
  if (!j.contains("token_logprobs")) return std::vector<double>{};
  if (!j["token_logprobs"].is_array()) {
    return absl::InvalidArgumentError("token_logprobs must be an array");
  }
  std::vector<double> out;
  for (const auto& v : j["token_logprobs"]) {
    if (!v.is_number()) return absl::InvalidArgumentError("token_logprobs must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

absl::StatusOr<std::string> HttpProvider::Generate(const std::string& prompt, uint64_t seed,
                                                   int max_tokens) const {
  const nlohmann::json request = {{"prompt", prompt}, {"seed", seed}, {"max_tokens", max_tokens}};
  ASSIGN_OR_RETURN(std::string body, Post("/generate", request.dump()));
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string()) {
    return absl::InvalidArgumentError("provider response lacks a string \"text\"");
  }
  return j["text"].get<std::string>();
}

absl::StatusOr<std::vector<double>> HttpProvider::TokenLogProbs(std::string_view text) const {
  const nlohmann::json request = {{"text", std::string(text)}};
  ASSIGN_OR_RETURN(std::string body, Post("/logprobs", request.dump()));
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("provider response is not a JSON object");
  }
  return LogProbsField(j);
}

}  // namespace assesskit::itemgen
