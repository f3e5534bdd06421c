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

#include "ragbench/dense_index.hpp"

#include <algorithm>
#include <numeric>

#include "ragbench/error.hpp"
#include "snapshot_io.hpp"

namespace ragbench {

double CosineScore(const DenseEmbedding& q, const DenseEmbedding& e) {
  if (q.dim() != e.dim() || q.dim() == 0) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(q.dim()) +
                          " vs " + std::to_string(e.dim()));
  }
  const double qn = detail::Norm(q.values.data(), q.dim());
  const double en = detail::Norm(e.values.data(), e.dim());
  if (qn == 0.0 || en == 0.0)
    throw InvalidArgument("cosine is undefined for a zero vector");
  return detail::Cosine(q.values.data(), qn, e.values.data(), en, q.dim());
}

namespace detail {

RankedResult TopK(std::span<const double> scores,
                  std::span<const std::string> doc_ids, std::size_t k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return doc_ids[a] < doc_ids[b];
                    });
  RankedResult out;
  out.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.entries.push_back({doc_ids[order[i]], scores[order[i]]});
  return out;
}

}  // namespace detail

DenseIndex DenseIndex::Build(std::vector<DenseEntry> entries) {
  if (entries.empty()) throw InvalidArgument("cannot build an empty index");
  std::sort(entries.begin(), entries.end(),
            [](const DenseEntry& a, const DenseEntry& b) { return a.first < b.first; });
  DenseIndex idx;
  idx.dim_ = entries.front().second.dim();
  if (idx.dim_ == 0) throw InvalidArgument("embedding dimension must be > 0");
  idx.values_.reserve(entries.size() * idx.dim_);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [id, emb] = entries[i];
    if (i > 0 && entries[i - 1].first == id)
      throw InvalidArgument("duplicate doc_id \"" + id + "\"");
    if (emb.dim() != idx.dim_) {
      throw InvalidArgument("dimension mismatch for \"" + id + "\": " +
                            std::to_string(emb.dim()) + " vs " +
                            std::to_string(idx.dim_));
    }
    const double norm = detail::Norm(emb.values.data(), idx.dim_);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw InvalidArgument("zero-norm vector for \"" + id + "\"");
    idx.doc_ids_.push_back(id);
    idx.values_.insert(idx.values_.end(), emb.values.begin(), emb.values.end());
    idx.norms_.push_back(norm);
  }
  return idx;
}

RankedResult DenseIndex::Query(const DenseEmbedding& q, std::size_t k) const {
  if (doc_ids_.empty()) throw InvalidArgument("query against an empty index");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (q.dim() != dim_) {
    throw InvalidArgument("dimension mismatch: query has " +
                          std::to_string(q.dim()) + ", index holds " +
                          std::to_string(dim_));
  }
  const double qn = detail::Norm(q.values.data(), dim_);
  if (qn == 0.0) throw InvalidArgument("zero query vector");
  std::vector<double> scores(doc_ids_.size());
  for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
    scores[i] = detail::Cosine(q.values.data(), qn, values_.data() + i * dim_,
                               norms_[i], dim_);
  }
  return detail::TopK(scores, doc_ids_, k);
}

std::size_t DenseIndex::memory_bytes() const {
  std::size_t ids = 0;
  for (const auto& id : doc_ids_) ids += sizeof(std::string) + id.size();
  return payload_bytes() + norms_.size() * sizeof(double) + ids;
}

std::size_t DenseIndex::Save(const std::filesystem::path& path) const {
  detail::LeWriter w;
  w.bytes("DRIX");
  w.u32(detail::kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(dim_));
  w.u64(doc_ids_.size());
  detail::WriteIdTable(w, doc_ids_);
  for (float v : values_) w.f32(v);
  return w.WriteTo(path);
}

DenseIndex DenseIndex::Load(const std::filesystem::path& path) {
  detail::LeReader r(path);
  r.ExpectMagic("DRIX");
  if (r.u32() != detail::kSnapshotVersion)
    throw DataError(path.string() + ": unsupported snapshot version");
  const std::size_t dim = r.u32();
  const std::uint64_t count = r.u64();
  auto ids = detail::ReadIdTable(r, count);
  if (r.remaining() != count * dim * sizeof(float))
    throw DataError(path.string() + ": vector payload size mismatch");
  std::vector<DenseEntry> entries;
  entries.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    DenseEmbedding e;
    e.values.resize(dim);
    for (auto& v : e.values) v = r.f32();
    entries.emplace_back(std::move(ids[i]), std::move(e));
  }
  r.ExpectEnd();
  try {
    return Build(std::move(entries));
  } catch (const Error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace ragbench
