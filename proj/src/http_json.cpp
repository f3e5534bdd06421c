// Copyright 2026 The ragbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "http_json.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <thread>

#include "ragbench/error.hpp"

namespace ragbench::detail {
namespace {

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

ParsedUrl SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint url \"" + url + "\" lacks a scheme");
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported url scheme \"" + scheme + "\"");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    throw ConfigError("https endpoints need a build with OpenSSL support");
  }
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::chrono::microseconds ToMicros(double seconds) {
  return std::chrono::microseconds(
      static_cast<long long>(std::llround(seconds * 1e6)));
}

}  // namespace

Json PostJson(const RemoteEndpoint& endpoint, const Json& body) {
  const ParsedUrl url = SplitUrl(endpoint.url);
  httplib::Headers headers;
  if (!endpoint.token_env.empty()) {
    const char* token = std::getenv(endpoint.token_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw ConfigError("environment variable " + endpoint.token_env +
                        " holding the provider token is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  const std::string payload = body.dump();
  const int attempts = 1 + std::max(0, endpoint.max_retries);
  std::string last_failure;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && endpoint.backoff_seconds > 0) {
      std::this_thread::sleep_for(
          ToMicros(endpoint.backoff_seconds * std::ldexp(1.0, attempt - 1)));
    }
    httplib::Client client(url.scheme_host_port);
    const auto timeout = ToMicros(endpoint.timeout_seconds);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(url.path, headers, payload, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw ProviderError(endpoint.url + " answered HTTP " +
                          std::to_string(res->status) + ": " + res->body);
    }
    try {
      return Json::parse(res->body);
    } catch (const Json::parse_error&) {
      throw ProviderError(endpoint.url + " returned a non-JSON body: " +
                          res->body.substr(0, 200));
    }
  }
  throw ProviderError(endpoint.url + " failed after " +
                      std::to_string(attempts) + " attempts (retries exhausted; " +
                      last_failure + ")");
}

}  // namespace ragbench::detail
