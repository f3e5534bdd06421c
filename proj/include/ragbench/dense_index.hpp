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
#include <string>
#include <utility>
#include <vector>

#include "ragbench/embed.hpp"
#include "ragbench/ranked.hpp"

namespace ragbench {

using DenseEntry = std::pair<std::string, DenseEmbedding>;

// Exact cosine top-k over one vector per document. Immutable once built;
// concurrent queries are safe.
class DenseIndex {
 public:
  // Throws InvalidArgument on empty input, duplicate ids, mixed dimensions or
  // zero vectors. Entries are stored sorted by doc_id, so insertion order has
  // no effect on anything observable.
  static DenseIndex Build(std::vector<DenseEntry> entries);

  // Reads a "DRIX" snapshot.
  static DenseIndex Load(const std::filesystem::path& path);
  // Writes a "DRIX" snapshot and returns its size in bytes.
  std::size_t Save(const std::filesystem::path& path) const;

  RankedResult Query(const DenseEmbedding& q, std::size_t k) const;

  std::size_t size() const { return doc_ids_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  std::span<const float> vector(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

  // float32 vector payload only.
  std::size_t payload_bytes() const { return values_.size() * sizeof(float); }
  // Payload plus norms and the id table.
  std::size_t memory_bytes() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> doc_ids_;
  std::vector<float> values_;
  std::vector<double> norms_;
};

}  // namespace ragbench
