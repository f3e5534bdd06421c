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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ragbench/embed.hpp"
#include "ragbench/json_fwd.hpp"
#include "ragbench/qa_gen.hpp"
#include "ragbench/radar.hpp"
#include "ragbench/semantic_metrics.hpp"

namespace ragbench {

enum class IndexKind { kDense, kLate };
enum class LateScoring { kMaxSim, kSumMaxSim };

struct EmbedderSpec {
  std::string name;
  std::string kind;  // "deterministic" or "remote"
  std::size_t dim = 0;
  std::size_t batch_size = 1;
  RemoteEndpoint endpoint;
};

struct GeneratorSpec {
  std::string kind;  // "mock" or "remote"
  std::optional<std::filesystem::path> script;
  std::optional<MockScript::Fallback> fallback;
  std::optional<std::size_t> fail_after_calls;
  RemoteEndpoint endpoint;
  double temperature = 0.0;
  int max_tokens = 256;
};

struct ArmSpec {
  std::string name;
  IndexKind index = IndexKind::kDense;
  std::string channel;
  // Late arms only: embed the document's chunk list instead of one vector of
  // the whole channel.
  bool chunking = false;
  LateScoring scoring = LateScoring::kMaxSim;
  std::string doc_embedder;
  std::string query_embedder;
  // Channel whose text is handed to the generator as retrieved context.
  std::string context_channel;
};

struct ExperimentConfig {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> qa_file;
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  std::size_t workers = 4;
  bool resume = false;

  std::map<std::string, EmbedderSpec> embedders;
  GeneratorSpec generation;
  std::vector<ArmSpec> arms;

  bool retrieval_metrics = true;
  bool semantic_metrics = true;
  SemanticOptions semantic_options;
  bool profiling = false;
  StdMode radar_std = StdMode::kPopulation;

  PromptTemplates prompts = PromptTemplates::Defaults();
  std::size_t context_token_budget = 0;

  std::string qa_channel;
  std::size_t qa_pairs = 10;
  std::size_t qa_max_reasks = 3;

  // Canonical tree (defaults filled in) echoed into reports.
  Json tree;

  const ArmSpec& arm(const std::string& name) const;
  // Identity of everything that affects results; excludes output location,
  // worker count and the resume flag.
  std::string fingerprint() const;
};

// Reads a config file into its canonical tree. Unknown keys and mistyped
// values throw ConfigError.
Json LoadConfigTree(const std::filesystem::path& path);

// Applies "dotted.key=value". The key must exist in the tree (array
// elements by index, e.g. "arms.0.k"); the value is read as JSON when it
// parses, else as a string, and must match the existing value's type.
void ApplyOverride(Json& tree, std::string_view assignment);

// Builds a typed config; relative paths resolve against `base_dir`.
ExperimentConfig ParseConfig(const Json& tree,
                             const std::filesystem::path& base_dir);

ExperimentConfig LoadConfig(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides = {});

std::unique_ptr<EmbeddingProvider> MakeEmbedder(const EmbedderSpec& spec);
std::unique_ptr<GenerationProvider> MakeGenerator(const GeneratorSpec& spec);

}  // namespace ragbench
