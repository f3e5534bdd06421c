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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ragbench/dense_index.hpp"
#include "ragbench/error.hpp"
#include "ragbench/late_index.hpp"
#include "test_util.hpp"

using namespace ragbench;

namespace {

DenseEmbedding E(std::vector<float> v) { return DenseEmbedding{std::move(v)}; }

MultiVectorEmbedding Group(std::mt19937_64& rng, std::size_t m, std::size_t dim) {
  MultiVectorEmbedding g;
  for (std::size_t i = 0; i < m; ++i) g.vectors.push_back(E(testutil::RandomVec(rng, dim)));
  return g;
}

}  // namespace

TEST_CASE("maxsim spot values") {
  const std::vector<DenseEmbedding> g{E({0, 1}), E({1, 0})};
  CHECK(MaxSimScore(E({1, 0}), g) == doctest::Approx(1.0));
  const std::vector<DenseEmbedding> empty;
  CHECK(testutil::KindOf([&] { MaxSimScore(E({1, 0}), empty); }) ==
        ErrorKind::kInvalidArgument);
  const std::vector<DenseEmbedding> mixed{E({0, 1}), E({1, 0, 0})};
  CHECK(testutil::KindOf([&] { MaxSimScore(E({1, 0}), mixed); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("maxsim equals loop over patches") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto g = Group(rng, 20, 8);
    const auto q = E(testutil::RandomVec(rng, 8));
    double best = -2;
    for (const auto& e : g.vectors) best = std::max(best, oracle::Cos(q.values, e.values));
    CHECK(MaxSimScore(q, g.vectors) == doctest::Approx(best).epsilon(1e-12));
    // The group containing q itself scores 1.
    auto with_q = g.vectors;
    with_q.push_back(q);
    CHECK(MaxSimScore(q, with_q) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sum maxsim") {
  std::mt19937_64 rng(4);
  const auto g = Group(rng, 10, 8);
  const auto q1 = E(testutil::RandomVec(rng, 8));
  CHECK(SumMaxSimScore(MultiVectorEmbedding{{q1}}, g.vectors) ==
        doctest::Approx(MaxSimScore(q1, g.vectors)).epsilon(1e-12));
  CHECK(SumMaxSimScore(g, g.vectors) == doctest::Approx(10.0).epsilon(1e-12));
  for (int t = 0; t < 10; ++t) {
    const auto qm = Group(rng, 4, 8);
    double want = 0;
    for (const auto& qv : qm.vectors) {
      double best = -2;
      for (const auto& e : g.vectors) best = std::max(best, oracle::Cos(qv.values, e.values));
      want += best;
    }
    CHECK(SumMaxSimScore(qm, g.vectors) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(testutil::KindOf([&] { SumMaxSimScore(MultiVectorEmbedding{}, g.vectors); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("late build") {
  std::mt19937_64 rng(2);
  auto idx = LateIndex::Build({{"a", Group(rng, 3, 4)}, {"b", Group(rng, 7, 4)}});
  CHECK(idx.size() == 2);
  CHECK(idx.vector_count() == 10);
  CHECK(idx.group_size(0) == 3);
  CHECK(idx.group_size(1) == 7);
  auto zero = Group(rng, 2, 4);
  zero.vectors[1] = E({0, 0, 0, 0});
  CHECK(testutil::KindOf([&] { LateIndex::Build({{"z", zero}}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(testutil::KindOf([] { LateIndex::Build({{"e", MultiVectorEmbedding{}}}); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("late query") {
  std::mt19937_64 rng(6);
  auto target = Group(rng, 5, 8);
  const auto q = target.vectors[2];
  auto idx = LateIndex::Build({{"A", target}, {"B", Group(rng, 5, 8)}, {"C", Group(rng, 5, 8)}});
  auto r = idx.Query(q, 1);
  CHECK(r.entries[0].doc_id == "A");
  CHECK(r.entries[0].score == doctest::Approx(1.0));
  CHECK(idx.Query(q, 99).entries.size() == 3);
}

TEST_CASE("late query matches oracle and ignores thread count") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<LateEntry> entries;
    std::vector<std::pair<std::string, std::vector<oracle::Vec>>> plain;
    for (int i = 0; i < 150; ++i) {
      const auto g = Group(rng, 1 + rng() % 6, 8);
      std::vector<oracle::Vec> pv;
      for (const auto& v : g.vectors) pv.push_back(v.values);
      entries.push_back({"d" + std::to_string(i), g});
      plain.push_back({"d" + std::to_string(i), pv});
    }
    auto idx = LateIndex::Build(entries);
    const auto q = testutil::RandomVec(rng, 8);
    const auto want = oracle::MaxSimTopK(q, plain, 5);
    for (std::size_t threads : {1, 3, 8}) {
      const auto got = idx.Query(E(q), 5, threads);
      REQUIRE(got.entries.size() == 5);
      for (std::size_t i = 0; i < 5; ++i) CHECK(got.entries[i].doc_id == want[i].first);
    }
  }
}

TEST_CASE("late snapshot round trip") {
  testutil::TempDir dir;
  std::mt19937_64 rng(12);
  auto idx = LateIndex::Build({{"x", Group(rng, 3, 6)}, {"y", Group(rng, 1, 6)},
                               {"w", Group(rng, 4, 6)}});
  const auto bytes = idx.Save(dir / "l.lrix");
  CHECK(bytes == std::filesystem::file_size(dir / "l.lrix"));
  auto back = LateIndex::Load(dir / "l.lrix");
  CHECK(back.vector_count() == 8);
  const auto q = E(testutil::RandomVec(rng, 6));
  CHECK(back.Query(q, 3) == idx.Query(q, 3));
  // A dense snapshot is not a late one.
  auto dense = DenseIndex::Build({{"a", E({1, 0})}});
  dense.Save(dir / "d.drix");
  CHECK(testutil::KindOf([&] { LateIndex::Load(dir / "d.drix"); }) == ErrorKind::kData);
}

TEST_CASE("single-vector groups agree with the dense index") {
  std::mt19937_64 rng(10);
  std::vector<DenseEntry> dense;
  std::vector<LateEntry> late;
  for (int i = 0; i < 40; ++i) {
    const auto v = E(testutil::RandomVec(rng, 8));
    dense.push_back({"d" + std::to_string(i), v});
    late.push_back({"d" + std::to_string(i), MultiVectorEmbedding{{v}}});
  }
  auto di = DenseIndex::Build(dense);
  auto li = LateIndex::Build(late);
  for (int t = 0; t < 20; ++t) {
    const auto q = E(testutil::RandomVec(rng, 8));
    CHECK(di.Query(q, 7) == li.Query(q, 7));
  }
}

TEST_CASE("late memory is proportional to vector count") {
  std::mt19937_64 rng(13);
  std::vector<LateEntry> late;
  for (int i = 0; i < 20; ++i) late.push_back({"d" + std::to_string(i), Group(rng, 30, 16)});
  auto li = LateIndex::Build(late);
  CHECK(li.payload_bytes() == 20 * 30 * 16 * 4);
  CHECK(li.memory_bytes() > li.payload_bytes());
}
