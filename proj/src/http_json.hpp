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

#pragma once

#include <string>

#include "ragbench/embed.hpp"
#include "ragbench/json_fwd.hpp"

namespace ragbench::detail {

// POSTs `body` and returns the parsed JSON response. Connection failures,
// 429 and 5xx are retried up to endpoint.max_retries times with exponential
// backoff; anything else fails immediately. Throws ProviderError.
Json PostJson(const RemoteEndpoint& endpoint, const Json& body);

}  // namespace ragbench::detail
