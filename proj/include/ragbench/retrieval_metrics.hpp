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
#include <optional>
#include <span>
#include <string>

#include "ragbench/ranked.hpp"

namespace ragbench {

// One question, one relevant document.
struct RetrievalJudgment {
  std::string query_id;
  std::string gold_doc_id;
  RankedResult ranked;
};

// 1-based position of the gold document, or nullopt when it was not
// retrieved.
std::optional<std::size_t> GoldRank(const RetrievalJudgment& j);

// 1/r, or 0 when the gold document is absent.
double ReciprocalRank(const RetrievalJudgment& j);

// The following throw InvalidArgument on an empty list or k < 1.
double Mrr(std::span<const RetrievalJudgment> js);
double RecallAtK(std::span<const RetrievalJudgment> js, std::size_t k);
double NdcgAtK(std::span<const RetrievalJudgment> js, std::size_t k);

// Binary single-gold NDCG@k: 1/log2(r+1) for r <= k, else 0.
double NdcgBinary(std::optional<std::size_t> gold_rank, std::size_t k);

// General graded NDCG@k: gains (2^rel - 1)/log2(i+1), normalized by the
// ideal (descending) ordering of the same labels. 0 when the ideal gain is 0.
double NdcgGraded(std::span<const double> relevance_by_rank, std::size_t k);

}  // namespace ragbench
