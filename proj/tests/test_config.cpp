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

#include "ragbench/config.hpp"
#include "ragbench/error.hpp"
#include "test_util.hpp"

using namespace ragbench;

namespace {

const char* kMinimal = R"({
  // comment lines are allowed
  "corpus": "data/c.jsonl",
  "embedders": {"e": {"kind": "deterministic", "dim": 32}},
  "arms": [{"name": "a", "channel": "native", "doc_embedder": "e"}]
})";

}  // namespace

TEST_CASE("defaults are filled in") {
  testutil::TempDir dir;
  testutil::WriteFile(dir / "c.json", kMinimal);
  const auto c = LoadConfig(dir / "c.json");
  CHECK(c.k == 5);
  CHECK(c.corpus == (dir.path() / "data/c.jsonl").lexically_normal());
  CHECK(c.output_dir == (dir.path() / "out").lexically_normal());
  REQUIRE(c.arms.size() == 1);
  CHECK(c.arms[0].query_embedder == "e");
  CHECK(c.arms[0].context_channel == "native");
  CHECK(c.generation.kind == "mock");
  CHECK(c.semantic_metrics);
  CHECK_FALSE(c.profiling);
  CHECK(c.tree.at("metrics").at("rouge1") == "recall");
}

TEST_CASE("unknown keys and bad types are rejected") {
  testutil::TempDir dir;
  testutil::WriteFile(dir / "u.json", R"({"corpus": "c", "kay": 1})");
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "u.json"); }) == ErrorKind::kConfig);
  testutil::WriteFile(dir / "t.json", R"({"corpus": "c", "k": "five"})");
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "t.json"); }) == ErrorKind::kConfig);
  testutil::WriteFile(dir / "n.json", R"({"corpus": "c", "arms": [{"nmae": "x"}]})");
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "n.json"); }) == ErrorKind::kConfig);
  testutil::WriteFile(dir / "p.json", "{ not json");
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "p.json"); }) == ErrorKind::kConfig);
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "missing.json"); }) == ErrorKind::kConfig);
}

TEST_CASE("cross references are checked") {
  testutil::TempDir dir;
  testutil::WriteFile(dir / "c.json", R"({"corpus": "c",
    "embedders": {"e": {"dim": 8}},
    "arms": [{"name": "a", "channel": "x", "doc_embedder": "nope"}]})");
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "c.json"); }) == ErrorKind::kConfig);
  testutil::WriteFile(dir / "d.json", R"({"corpus": "c",
    "embedders": {"e": {"dim": 8}},
    "arms": [{"name": "a", "channel": "x", "doc_embedder": "e"},
             {"name": "a", "channel": "y", "doc_embedder": "e"}]})");
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "d.json"); }) == ErrorKind::kConfig);
}

TEST_CASE("overrides") {
  testutil::TempDir dir;
  testutil::WriteFile(dir / "c.json", kMinimal);
  const auto c = LoadConfig(dir / "c.json", {"k=1", "arms.0.channel=ocr",
                                              "metrics.semantic=false"});
  CHECK(c.k == 1);
  CHECK(c.arms[0].channel == "ocr");
  CHECK_FALSE(c.semantic_metrics);
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "c.json", {"nope=1"}); }) ==
        ErrorKind::kConfig);
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "c.json", {"k=abc"}); }) ==
        ErrorKind::kConfig);
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "c.json", {"arms.3.name=x"}); }) ==
        ErrorKind::kConfig);
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "c.json", {"metrics=1"}); }) ==
        ErrorKind::kConfig);
  CHECK(testutil::KindOf([&] { LoadConfig(dir / "c.json", {"k"}); }) == ErrorKind::kConfig);
}

TEST_CASE("fingerprint ignores where and how fast") {
  testutil::TempDir dir;
  testutil::WriteFile(dir / "c.json", kMinimal);
  const auto a = LoadConfig(dir / "c.json");
  const auto b = LoadConfig(dir / "c.json", {"workers=1", "output_dir=elsewhere", "resume=true"});
  const auto c = LoadConfig(dir / "c.json", {"k=3"});
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("shipped sample config parses") {
  const auto c = LoadConfig(RAGBENCH_SOURCE_DIR "/configs/sample_mock.json");
  CHECK(c.arms.size() == 3);
  CHECK(MakeEmbedder(c.embedders.at("hash256"))->dim() == 256);
  CHECK(MakeGenerator(c.generation)->identity().find("mock") != std::string::npos);
}
