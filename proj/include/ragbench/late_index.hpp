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
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ragbench/embed.hpp"
#include "ragbench/ranked.hpp"

namespace ragbench {

// Late-interaction scoring: max over the group's vectors of cos(q, v).
double MaxSimScore(const DenseEmbedding& q, std::span<const DenseEmbedding> group);

// Token-level variant: sum over query vectors of MaxSimScore. Reduces to
// MaxSimScore for a single query vector.
double SumMaxSimScore(const MultiVectorEmbedding& q,
                      std::span<const DenseEmbedding> group);

using LateEntry = std::pair<std::string, MultiVectorEmbedding>;

// Exact late-interaction top-k over per-document vector groups of varying
// size. Immutable once built.
class LateIndex {
 public:
  // Same checks as DenseIndex::Build, applied to every vector of every group;
  // empty groups are rejected too.
  static LateIndex Build(std::vector<LateEntry> entries);

  // "LRIX" snapshot: DRIX-style header, id table, per-document group lengths
  // (u32), then every vector row-major.
  static LateIndex Load(const std::filesystem::path& path);
  std::size_t Save(const std::filesystem::path& path) const;

  // `threads` > 1 fans document scoring out; results do not depend on it.
  RankedResult Query(const DenseEmbedding& q, std::size_t k,
                     std::size_t threads = 1) const;
  RankedResult QueryMulti(const MultiVectorEmbedding& q, std::size_t k,
                          std::size_t threads = 1) const;

  std::size_t size() const { return doc_ids_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t vector_count() const { return norms_.size(); }
  std::size_t group_size(std::size_t doc) const {
    return offsets_[doc + 1] - offsets_[doc];
  }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  std::span<const float> vector(std::size_t doc, std::size_t j) const {
    return {values_.data() + (offsets_[doc] + j) * dim_, dim_};
  }

  std::size_t payload_bytes() const { return values_.size() * sizeof(float); }
  std::size_t memory_bytes() const;

 private:
  template <typename ScoreDoc>
  RankedResult Rank(std::size_t k, std::size_t threads, ScoreDoc&& score) const;

  std::size_t dim_ = 0;
  std::vector<std::string> doc_ids_;
  // Group d spans vectors [offsets_[d], offsets_[d + 1]).
  std::vector<std::size_t> offsets_;
  std::vector<float> values_;
  std::vector<double> norms_;
};

}  // namespace ragbench
