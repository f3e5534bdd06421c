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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>

#include "ragbench/embed.hpp"
#include "ragbench/error.hpp"

namespace testutil {

// Removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ragbench_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void WriteFile(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::vector<float> RandomVec(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> d(0.0f, 1.0f);
  std::vector<float> v(dim);
  for (auto& x : v) x = d(rng);
  return v;
}

template <typename Fn>
ragbench::ErrorKind KindOf(Fn&& fn) {
  try {
    fn();
  } catch (const ragbench::Error& e) {
    return e.kind();
  }
  return ragbench::ErrorKind::kInternal;
}

// Scripted provider for contract tests.
class FakeEmbedder final : public ragbench::EmbeddingProvider {
 public:
  enum class Mode { kOk, kWrongDim, kNan, kZero, kFailOn };
  FakeEmbedder(std::size_t dim, Mode mode, std::size_t batch = 1, std::string fail_on = "")
      : dim_(dim), mode_(mode), batch_(batch), fail_on_(std::move(fail_on)) {}
  std::size_t dim() const override { return dim_; }
  std::string identity() const override { return "fake"; }
  std::size_t batch_size() const override { return batch_; }

 protected:
  std::vector<std::vector<float>> EmbedBatch(std::span<const std::string> texts) override {
    std::vector<std::vector<float>> out;
    for (const auto& t : texts) {
      if (mode_ == Mode::kFailOn && t == fail_on_)
        throw ragbench::ProviderError("refused " + t);
      std::vector<float> v(mode_ == Mode::kWrongDim ? dim_ + 1 : dim_, 0.0f);
      if (mode_ != Mode::kZero) v[t.size() % dim_] = 1.0f;
      if (mode_ == Mode::kNan) v[0] = std::nanf("");
      out.push_back(v);
    }
    return out;
  }

 private:
  std::size_t dim_;
  Mode mode_;
  std::size_t batch_;
  std::string fail_on_;
};

}  // namespace testutil
