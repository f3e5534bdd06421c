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

#include "ragbench/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "http_json.hpp"
#include "ragbench/error.hpp"

namespace ragbench {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

// Byte offsets of UTF-8 code point starts, plus the end offset.
std::vector<std::size_t> CodePointBounds(const std::string& s) {
  std::vector<std::size_t> bounds;
  bounds.reserve(s.size() + 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) bounds.push_back(i);
  }
  bounds.push_back(s.size());
  return bounds;
}

}  // namespace

std::vector<DenseEmbedding> EmbeddingProvider::Embed(
    std::span<const std::string> texts) {
  std::vector<DenseEmbedding> out;
  out.reserve(texts.size());
  const std::size_t step = std::max<std::size_t>(1, batch_size());
  for (std::size_t begin = 0; begin < texts.size(); begin += step) {
    const auto batch = texts.subspan(begin, std::min(step, texts.size() - begin));
    for (const auto& t : batch) {
      if (t.empty()) throw InvalidArgument("cannot embed empty text");
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto raw = EmbedBatch(batch);
    const auto t1 = std::chrono::steady_clock::now();
    calls_.fetch_add(1, std::memory_order_relaxed);
    texts_.fetch_add(batch.size(), std::memory_order_relaxed);
    nanos_.fetch_add(
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count(),
        std::memory_order_relaxed);
    if (raw.size() != batch.size()) {
      throw ProviderError(identity() + " returned " + std::to_string(raw.size()) +
                          " vectors for " + std::to_string(batch.size()) +
                          " inputs");
    }
    for (auto& v : raw) {
      if (v.size() != dim()) {
        throw ProviderError("dimension mismatch: " + identity() + " declared " +
                            std::to_string(dim()) + " but returned " +
                            std::to_string(v.size()));
      }
      double norm2 = 0.0;
      for (float x : v) {
        if (!std::isfinite(x))
          throw ProviderError(identity() + " returned a non-finite value");
        norm2 += static_cast<double>(x) * x;
      }
      if (norm2 == 0.0)
        throw ProviderError(identity() + " returned a zero vector");
      out.push_back(DenseEmbedding{std::move(v)});
    }
  }
  return out;
}

ProviderCallStats EmbeddingProvider::stats() const {
  return {calls_.load(), texts_.load(), static_cast<double>(nanos_.load()) * 1e-9};
}

void EmbeddingProvider::reset_stats() {
  calls_ = 0;
  texts_ = 0;
  nanos_ = 0;
}

DeterministicEmbedder::DeterministicEmbedder(std::size_t dim,
                                             std::size_t batch_size)
    : dim_(dim), batch_size_(std::max<std::size_t>(1, batch_size)) {
  if (dim == 0) throw ConfigError("deterministic embedder needs dim > 0");
}

std::string DeterministicEmbedder::identity() const {
  return "deterministic-test(dim=" + std::to_string(dim_) + ",ngrams=1..3)";
}

std::vector<std::vector<float>> DeterministicEmbedder::EmbedBatch(
    std::span<const std::string> texts) {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> acc(dim_, 0.0);
    const auto bounds = CodePointBounds(text);
    const std::size_t chars = bounds.size() - 1;
    for (std::size_t n = 1; n <= 3; ++n) {
      for (std::size_t i = 0; i + n <= chars; ++i) {
        std::uint64_t h = kFnvOffset ^ n;
        for (std::size_t b = bounds[i]; b < bounds[i + n]; ++b) {
          h ^= static_cast<unsigned char>(text[b]);
          h *= kFnvPrime;
        }
        acc[h % dim_] += 1.0;
      }
    }
    double norm2 = 0.0;
    for (double x : acc) norm2 += x * x;
    const double inv = 1.0 / std::sqrt(norm2);
    std::vector<float> v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v[i] = static_cast<float>(acc[i] * inv);
    out.push_back(std::move(v));
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteEndpoint endpoint, std::size_t dim,
                               std::size_t batch_size)
    : endpoint_(std::move(endpoint)),
      dim_(dim),
      batch_size_(std::max<std::size_t>(1, batch_size)) {
  if (dim == 0) throw ConfigError("remote embedder needs a declared dim > 0");
  if (endpoint_.url.empty()) throw ConfigError("remote embedder needs a url");
}

std::string RemoteEmbedder::identity() const {
  return "remote(url=" + endpoint_.url + ",model=" + endpoint_.model +
         ",dim=" + std::to_string(dim_) + ")";
}

std::vector<std::vector<float>> RemoteEmbedder::EmbedBatch(
    std::span<const std::string> texts) {
  Json body;
  body["model"] = endpoint_.model;
  body["input"] = Json::array();
  for (const auto& t : texts) body["input"].push_back(t);
  const Json res = detail::PostJson(endpoint_, body);

  std::vector<std::vector<float>> out(texts.size());
  std::vector<bool> filled(texts.size(), false);
  try {
    const auto& data = res.at("data");
    if (!data.is_array() || data.size() != texts.size()) {
      throw ProviderError("embedding response has " +
                          std::to_string(data.is_array() ? data.size() : 0) +
                          " items for " + std::to_string(texts.size()) +
                          " inputs");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& item = data[i];
      const std::size_t idx =
          item.contains("index") ? item.at("index").get<std::size_t>() : i;
      if (idx >= texts.size() || filled[idx])
        throw ProviderError("embedding response has a bad index");
      out[idx] = item.at("embedding").get<std::vector<float>>();
      filled[idx] = true;
    }
  } catch (const Json::exception& e) {
    throw ProviderError("malformed embedding response: " + std::string(e.what()));
  }
  return out;
}

DenseEmbedding EmbedText(EmbeddingProvider& provider, const std::string& text) {
  if (text.empty()) throw InvalidArgument("cannot embed empty text");
  auto v = provider.Embed(std::span<const std::string>(&text, 1));
  return std::move(v.front());
}

MultiVectorEmbedding EmbedChunks(EmbeddingProvider& provider,
                                 std::span<const std::string> chunks) {
  if (chunks.empty()) throw InvalidArgument("cannot embed an empty chunk list");
  return MultiVectorEmbedding{provider.Embed(chunks)};
}

DenseEmbedding EmbedQuery(EmbeddingProvider& provider,
                          const std::string& question,
                          std::optional<std::size_t> index_dim) {
  if (index_dim && *index_dim != provider.dim()) {
    throw InvalidArgument("dimension mismatch: query provider " +
                          provider.identity() + " produces " +
                          std::to_string(provider.dim()) +
                          " but the index holds dim " +
                          std::to_string(*index_dim));
  }
  return EmbedText(provider, question);
}

}  // namespace ragbench
