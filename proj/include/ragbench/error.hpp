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

#include <stdexcept>
#include <string>

namespace ragbench {

// Coarse failure classes. The C API and the CLI exit codes are derived from
// these, so the numeric values are part of the public contract.
enum class ErrorKind : int {
  kInvalidArgument = 1,
  kConfig = 2,
  kProvider = 3,
  kData = 4,
  kIo = 5,
  kInternal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error InvalidArgument(const std::string& what) {
  return Error(ErrorKind::kInvalidArgument, what);
}
inline Error ConfigError(const std::string& what) {
  return Error(ErrorKind::kConfig, what);
}
inline Error ProviderError(const std::string& what) {
  return Error(ErrorKind::kProvider, what);
}
inline Error DataError(const std::string& what) {
  return Error(ErrorKind::kData, what);
}
inline Error IoError(const std::string& what) {
  return Error(ErrorKind::kIo, what);
}

}  // namespace ragbench
