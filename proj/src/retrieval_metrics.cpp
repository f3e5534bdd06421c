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

#include "ragbench/retrieval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ragbench/error.hpp"

namespace ragbench {
namespace {

void CheckList(std::span<const RetrievalJudgment> js) {
  if (js.empty()) throw InvalidArgument("metric over an empty judgment list");
}

void CheckK(std::size_t k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
}

}  // namespace

std::optional<std::size_t> GoldRank(const RetrievalJudgment& j) {
  const auto& e = j.ranked.entries;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].doc_id == j.gold_doc_id) return i + 1;
  }
  return std::nullopt;
}

double ReciprocalRank(const RetrievalJudgment& j) {
  const auto r = GoldRank(j);
  return r ? 1.0 / static_cast<double>(*r) : 0.0;
}

double Mrr(std::span<const RetrievalJudgment> js) {
  CheckList(js);
  double sum = 0.0;
  for (const auto& j : js) sum += ReciprocalRank(j);
  return sum / static_cast<double>(js.size());
}

double RecallAtK(std::span<const RetrievalJudgment> js, std::size_t k) {
  CheckList(js);
  CheckK(k);
  std::size_t hits = 0;
  for (const auto& j : js) {
    const auto r = GoldRank(j);
    if (r && *r <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(js.size());
}

double NdcgBinary(std::optional<std::size_t> gold_rank, std::size_t k) {
  CheckK(k);
  if (!gold_rank || *gold_rank > k) return 0.0;
  return 1.0 / std::log2(static_cast<double>(*gold_rank) + 1.0);
}

double NdcgGraded(std::span<const double> relevance_by_rank, std::size_t k) {
  CheckK(k);
  auto dcg = [k](std::span<const double> rels) {
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(k, rels.size()); ++i) {
      sum += (std::pow(2.0, rels[i]) - 1.0) /
             std::log2(static_cast<double>(i + 1) + 1.0);
    }
    return sum;
  };
  std::vector<double> ideal(relevance_by_rank.begin(), relevance_by_rank.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal);
  return idcg > 0.0 ? dcg(relevance_by_rank) / idcg : 0.0;
}

double NdcgAtK(std::span<const RetrievalJudgment> js, std::size_t k) {
  CheckList(js);
  CheckK(k);
  double sum = 0.0;
  for (const auto& j : js) sum += NdcgBinary(GoldRank(j), k);
  return sum / static_cast<double>(js.size());
}

}  // namespace ragbench
