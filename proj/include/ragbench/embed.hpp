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
#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ragbench {

struct DenseEmbedding {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const DenseEmbedding&) const = default;
};

// An ordered group of same-dimension vectors, one per chunk.
struct MultiVectorEmbedding {
  std::vector<DenseEmbedding> vectors;

  std::size_t size() const { return vectors.size(); }
  std::size_t dim() const { return vectors.empty() ? 0 : vectors[0].dim(); }
};

struct ProviderCallStats {
  std::size_t calls = 0;
  std::size_t texts = 0;
  double seconds = 0.0;
};

// Text -> vector boundary. Subclasses implement EmbedBatch; callers go
// through Embed(), which counts calls and checks every returned vector for
// the declared dimension and finite values.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dim() const = 0;
  // Human-readable identity (kind, model, parameters) echoed into reports.
  virtual std::string identity() const = 0;
  // Texts per provider call. 1 reproduces per-item timing.
  virtual std::size_t batch_size() const { return 1; }

  // One provider call per batch_size() texts. Thread-safe.
  std::vector<DenseEmbedding> Embed(std::span<const std::string> texts);

  ProviderCallStats stats() const;
  void reset_stats();

 protected:
  // Exactly one underlying call; returns one vector per input, in order.
  virtual std::vector<std::vector<float>> EmbedBatch(
      std::span<const std::string> texts) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> texts_{0};
  std::atomic<long long> nanos_{0};
};

// Character n-gram (n = 1..3) feature hashing into `dim` buckets followed by
// unit normalization. Pure: equal input gives bitwise-equal output.
class DeterministicEmbedder final : public EmbeddingProvider {
 public:
  explicit DeterministicEmbedder(std::size_t dim, std::size_t batch_size = 1);

  std::size_t dim() const override { return dim_; }
  std::string identity() const override;
  std::size_t batch_size() const override { return batch_size_; }

 protected:
  std::vector<std::vector<float>> EmbedBatch(
      std::span<const std::string> texts) override;

 private:
  std::size_t dim_;
  std::size_t batch_size_;
};

struct RemoteEndpoint {
  std::string url;
  std::string model;
  double timeout_seconds = 30.0;
  int max_retries = 2;
  double backoff_seconds = 0.25;
  // Name of the environment variable holding a bearer token; empty for none.
  std::string token_env;
};

// Client for the {"model", "input"} -> {"data":[{"embedding","index"}]}
// embeddings endpoint convention.
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  RemoteEmbedder(RemoteEndpoint endpoint, std::size_t dim,
                 std::size_t batch_size = 1);

  std::size_t dim() const override { return dim_; }
  std::string identity() const override;
  std::size_t batch_size() const override { return batch_size_; }

 protected:
  std::vector<std::vector<float>> EmbedBatch(
      std::span<const std::string> texts) override;

 private:
  RemoteEndpoint endpoint_;
  std::size_t dim_;
  std::size_t batch_size_;
};

DenseEmbedding EmbedText(EmbeddingProvider& provider, const std::string& text);

// All-or-nothing: any failing chunk fails the whole group.
MultiVectorEmbedding EmbedChunks(EmbeddingProvider& provider,
                                 std::span<const std::string> chunks);

// Same path as EmbedText; `index_dim`, when given, must match the provider.
DenseEmbedding EmbedQuery(EmbeddingProvider& provider,
                          const std::string& question,
                          std::optional<std::size_t> index_dim = {});

}  // namespace ragbench
