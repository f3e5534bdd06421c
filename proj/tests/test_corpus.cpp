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

#include "ragbench/corpus.hpp"
#include "ragbench/error.hpp"
#include "test_util.hpp"

using namespace ragbench;

namespace {

std::string Doc(const std::string& id, int level, const std::string& extra = "") {
  return R"({"kind":"doc","doc_id":")" + id + R"(","level":)" + std::to_string(level) +
         R"(,"channels":{"native":"text of )" + id + R"(","ocr":"tcxt of )" + id + "\"}" +
         extra + "}\n";
}

std::string Qa(const std::string& doc, const std::string& q) {
  return R"({"kind":"qa","doc_id":")" + doc + R"(","question":")" + q +
         R"(","answer":"an answer"})" "\n";
}

}  // namespace

TEST_CASE("load preserves counts") {
  const Corpus c = ParseCorpus(Doc("A", 0) + Doc("B", 2) + Qa("A", "q1") + Qa("B", "q2") +
                                   Qa("A", "q3"),
                               "mem");
  CHECK(c.documents().size() == 2);
  CHECK(c.qa_pairs().size() == 3);
  CHECK(c.at("B").level == 2);
  CHECK(c.find("Z") == nullptr);
  const auto per = c.questions_per_level();
  CHECK(per[0] == 2);
  CHECK(per[2] == 1);
}

TEST_CASE("duplicate doc id is named") {
  try {
    ParseCorpus(Doc("A", 0) + Doc("A", 1), "mem");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kData);
    CHECK(std::string(e.what()).find("\"A\"") != std::string::npos);
    CHECK(std::string(e.what()).find("mem:2") != std::string::npos);
  }
}

TEST_CASE("dangling pair is named") {
  try {
    ParseCorpus(Doc("A", 0) + Qa("Z", "q"), "mem");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kData);
    CHECK(std::string(e.what()).find("Z") != std::string::npos);
  }
}

TEST_CASE("malformed records") {
  CHECK(testutil::KindOf([] { ParseCorpus("{not json\n", "m"); }) == ErrorKind::kData);
  CHECK(testutil::KindOf([] { ParseCorpus(Doc("A", 4), "m"); }) == ErrorKind::kData);
  CHECK(testutil::KindOf([] { ParseCorpus(Doc("A", 0, R"(,"colour":"red")"), "m"); }) ==
        ErrorKind::kData);
  CHECK(testutil::KindOf([] { ParseCorpus(Doc("A", 0, R"(,"chunks":[])"), "m"); }) ==
        ErrorKind::kData);
  CHECK(testutil::KindOf([] { ParseCorpus(R"({"kind":"page"})" "\n", "m"); }) ==
        ErrorKind::kData);
  // Blank lines are fine.
  CHECK(ParseCorpus("\n" + Doc("A", 0) + "\n\n", "m").documents().size() == 1);
}

TEST_CASE("segment by level") {
  const Corpus c = ParseCorpus(Doc("A", 0) + Doc("B", 0) + Doc("C", 3), "m");
  const auto buckets = SegmentByLevel(c);
  CHECK(buckets[0].documents.size() == 2);
  CHECK(buckets[1].documents.empty());
  CHECK(buckets[2].documents.empty());
  CHECK(buckets[3].documents.size() == 1);

  std::string text = Doc("D", 2);
  for (int i = 0; i < 10; ++i) text += Qa("D", "question " + std::to_string(i));
  const auto b2 = SegmentByLevel(ParseCorpus(text, "m"));
  CHECK(b2[2].qa_indices.size() == 10);
  for (int l : {0, 1, 3}) CHECK(b2[l].qa_indices.empty());
}

TEST_CASE("save and load round trip") {
  testutil::TempDir dir;
  const Corpus c =
      ParseCorpus(R"({"kind":"meta","ocr_seconds_per_doc":{"ocr":0.5}})" "\n" +
                      Doc("A", 1, R"(,"chunks":["one","two"],"features":["table"])") +
                      Doc("B", 3) + Qa("B", "why?"),
                  "m");
  SaveCorpus(c, dir / "c.jsonl");
  const Corpus back = LoadCorpus(dir / "c.jsonl");
  CHECK(back == c);
  CHECK(back.ocr_seconds_per_doc().at("ocr") == doctest::Approx(0.5));
}

TEST_CASE("separate qa file") {
  testutil::TempDir dir;
  testutil::WriteFile(dir / "docs.jsonl", Doc("A", 0));
  testutil::WriteFile(dir / "qa.jsonl", Qa("A", "q"));
  const Corpus c = LoadCorpus(dir / "docs.jsonl", dir / "qa.jsonl");
  CHECK(c.qa_pairs().size() == 1);
}

TEST_CASE("missing file is an io error") {
  CHECK(testutil::KindOf([] { LoadCorpus("/nonexistent/x.jsonl"); }) == ErrorKind::kIo);
}

TEST_CASE("channel requirements") {
  const Corpus c = ParseCorpus(Doc("A", 0), "m");
  const std::vector<std::string> ok{"native"}, bad{"scan"};
  CHECK_NOTHROW(c.require_channels(ok));
  CHECK(testutil::KindOf([&] { c.require_channels(bad); }) == ErrorKind::kData);
  CHECK(testutil::KindOf([&] { c.require_chunks(); }) == ErrorKind::kData);
}

TEST_CASE("validation collects every finding") {
  testutil::TempDir dir;
  testutil::WriteFile(dir / "c.jsonl", Doc("A", 0) + Doc("A", 1) + "{oops\n" +
                                           Qa("A", "fine") + Qa("Z", "dangling"));
  const std::vector<std::string> channels{"native", "scan"};
  const auto r = ValidateCorpusFile(dir / "c.jsonl", channels);
  CHECK_FALSE(r.ok());
  std::vector<std::string> codes;
  for (const auto& f : r.findings) codes.push_back(f.code);
  auto has = [&](const std::string& c) {
    return std::find(codes.begin(), codes.end(), c) != codes.end();
  };
  CHECK(has("duplicate_id"));
  CHECK(has("parse"));
  CHECK(has("dangling_doc"));
  CHECK(has("missing_channel"));
  for (const auto& f : r.findings) {
    if (f.code == "dangling_doc") CHECK(f.query_id == "q000001");
    if (f.code == "parse") CHECK(f.line == 3);
  }
}

TEST_CASE("validation of a clean corpus") {
  const auto r = ValidateCorpusFile(RAGBENCH_SOURCE_DIR "/data/sample/corpus.jsonl");
  CHECK(r.ok());
  CHECK(r.documents == 20);
  CHECK(r.qa_pairs == 40);
}

TEST_CASE("query ids") {
  CHECK(QueryId(0) == "q000000");
  CHECK(QueryId(41955) == "q041955");
}
