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

#include "ragbench/late_index.hpp"

#include <algorithm>
#include <limits>

#include "ragbench/error.hpp"
#include "ragbench/parallel.hpp"
#include "snapshot_io.hpp"

namespace ragbench {

double MaxSimScore(const DenseEmbedding& q,
                   std::span<const DenseEmbedding> group) {
  if (group.empty()) throw InvalidArgument("MaxSim over an empty group");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : group) best = std::max(best, CosineScore(q, v));
  return best;
}

double SumMaxSimScore(const MultiVectorEmbedding& q,
                      std::span<const DenseEmbedding> group) {
  if (q.vectors.empty()) throw InvalidArgument("empty query vector set");
  double total = 0.0;
  for (const auto& qv : q.vectors) total += MaxSimScore(qv, group);
  return total;
}

LateIndex LateIndex::Build(std::vector<LateEntry> entries) {
  if (entries.empty()) throw InvalidArgument("cannot build an empty index");
  std::sort(entries.begin(), entries.end(),
            [](const LateEntry& a, const LateEntry& b) { return a.first < b.first; });
  LateIndex idx;
  idx.dim_ = entries.front().second.dim();
  if (idx.dim_ == 0) throw InvalidArgument("embedding dimension must be > 0");
  idx.offsets_.push_back(0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [id, group] = entries[i];
    if (i > 0 && entries[i - 1].first == id)
      throw InvalidArgument("duplicate doc_id \"" + id + "\"");
    if (group.vectors.empty())
      throw InvalidArgument("empty vector group for \"" + id + "\"");
    for (const auto& v : group.vectors) {
      if (v.dim() != idx.dim_) {
        throw InvalidArgument("dimension mismatch in group \"" + id + "\": " +
                              std::to_string(v.dim()) + " vs " +
                              std::to_string(idx.dim_));
      }
      const double norm = detail::Norm(v.values.data(), idx.dim_);
      if (!(norm > 0.0) || !std::isfinite(norm))
        throw InvalidArgument("zero-norm vector in group \"" + id + "\"");
      idx.values_.insert(idx.values_.end(), v.values.begin(), v.values.end());
      idx.norms_.push_back(norm);
    }
    idx.doc_ids_.push_back(id);
    idx.offsets_.push_back(idx.norms_.size());
  }
  return idx;
}

template <typename ScoreDoc>
RankedResult LateIndex::Rank(std::size_t k, std::size_t threads,
                             ScoreDoc&& score) const {
  if (doc_ids_.empty()) throw InvalidArgument("query against an empty index");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  std::vector<double> scores(doc_ids_.size());
  constexpr std::size_t kDocsPerTask = 64;
  const std::size_t tasks = (doc_ids_.size() + kDocsPerTask - 1) / kDocsPerTask;
  ParallelFor(tasks, threads, [&](std::size_t t) {
    const std::size_t end = std::min(doc_ids_.size(), (t + 1) * kDocsPerTask);
    for (std::size_t d = t * kDocsPerTask; d < end; ++d) scores[d] = score(d);
  });
  return detail::TopK(scores, doc_ids_, k);
}

RankedResult LateIndex::Query(const DenseEmbedding& q, std::size_t k,
                              std::size_t threads) const {
  if (q.dim() != dim_) {
    throw InvalidArgument("dimension mismatch: query has " +
                          std::to_string(q.dim()) + ", index holds " +
                          std::to_string(dim_));
  }
  const double qn = detail::Norm(q.values.data(), dim_);
  if (qn == 0.0) throw InvalidArgument("zero query vector");
  return Rank(k, threads, [&](std::size_t d) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t v = offsets_[d]; v < offsets_[d + 1]; ++v) {
      best = std::max(best, detail::Cosine(q.values.data(), qn,
                                           values_.data() + v * dim_,
                                           norms_[v], dim_));
    }
    return best;
  });
}

RankedResult LateIndex::QueryMulti(const MultiVectorEmbedding& q, std::size_t k,
                                   std::size_t threads) const {
  if (q.vectors.empty()) throw InvalidArgument("empty query vector set");
  std::vector<double> qnorms;
  for (const auto& qv : q.vectors) {
    if (qv.dim() != dim_) {
      throw InvalidArgument("dimension mismatch: query has " +
                            std::to_string(qv.dim()) + ", index holds " +
                            std::to_string(dim_));
    }
    qnorms.push_back(detail::Norm(qv.values.data(), dim_));
    if (qnorms.back() == 0.0) throw InvalidArgument("zero query vector");
  }
  return Rank(k, threads, [&](std::size_t d) {
    double total = 0.0;
    for (std::size_t j = 0; j < q.vectors.size(); ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t v = offsets_[d]; v < offsets_[d + 1]; ++v) {
        best = std::max(best, detail::Cosine(q.vectors[j].values.data(),
                                             qnorms[j], values_.data() + v * dim_,
                                             norms_[v], dim_));
      }
      total += best;
    }
    return total;
  });
}

std::size_t LateIndex::memory_bytes() const {
  std::size_t ids = 0;
  for (const auto& id : doc_ids_) ids += sizeof(std::string) + id.size();
  return payload_bytes() + norms_.size() * sizeof(double) +
         offsets_.size() * sizeof(std::size_t) + ids;
}

std::size_t LateIndex::Save(const std::filesystem::path& path) const {
  detail::LeWriter w;
  w.bytes("LRIX");
  w.u32(detail::kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(dim_));
  w.u64(doc_ids_.size());
  detail::WriteIdTable(w, doc_ids_);
  for (std::size_t d = 0; d < doc_ids_.size(); ++d)
    w.u32(static_cast<std::uint32_t>(group_size(d)));
  for (float v : values_) w.f32(v);
  return w.WriteTo(path);
}

LateIndex LateIndex::Load(const std::filesystem::path& path) {
  detail::LeReader r(path);
  r.ExpectMagic("LRIX");
  if (r.u32() != detail::kSnapshotVersion)
    throw DataError(path.string() + ": unsupported snapshot version");
  const std::size_t dim = r.u32();
  const std::uint64_t count = r.u64();
  auto ids = detail::ReadIdTable(r, count);
  std::vector<std::uint32_t> lengths(count);
  std::uint64_t total = 0;
  for (auto& len : lengths) {
    len = r.u32();
    total += len;
  }
  if (r.remaining() != total * dim * sizeof(float))
    throw DataError(path.string() + ": vector payload size mismatch");
  std::vector<LateEntry> entries;
  entries.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    MultiVectorEmbedding group;
    group.vectors.resize(lengths[i]);
    for (auto& v : group.vectors) {
      v.values.resize(dim);
      for (auto& x : v.values) x = r.f32();
    }
    entries.emplace_back(std::move(ids[i]), std::move(group));
  }
  r.ExpectEnd();
  try {
    return Build(std::move(entries));
  } catch (const Error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace ragbench
