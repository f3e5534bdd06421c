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

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ragbench/embed.hpp"

namespace ragbench {

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const ScoredDoc&) const = default;
};

// Scores non-increasing, doc_ids distinct, equal scores in ascending doc_id.
struct RankedResult {
  std::string query_id;
  std::vector<ScoredDoc> entries;

  std::size_t size() const { return entries.size(); }
  bool operator==(const RankedResult&) const = default;
};

// q.e / (|q| |e|). Throws InvalidArgument on dimension mismatch or a zero
// vector.
double CosineScore(const DenseEmbedding& q, const DenseEmbedding& e);

namespace detail {

inline double Dot(const float* a, const float* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

inline double Norm(const float* a, std::size_t dim) {
  return std::sqrt(Dot(a, a, dim));
}

// The single cosine expression shared by every scoring path, so that the
// dense and late-interaction indexes agree bit for bit on equal inputs.
inline double Cosine(const float* q, double q_norm, const float* e,
                     double e_norm, std::size_t dim) {
  return Dot(q, e, dim) / (q_norm * e_norm);
}

// Selects the k best (score desc, doc_id asc) of `scores`, which is parallel
// to `doc_ids`.
RankedResult TopK(std::span<const double> scores,
                  std::span<const std::string> doc_ids, std::size_t k);

}  // namespace detail
}  // namespace ragbench
