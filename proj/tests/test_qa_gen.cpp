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

#include "ragbench/error.hpp"
#include "ragbench/qa_gen.hpp"
#include "test_util.hpp"

using namespace ragbench;

namespace {

std::string Numbered(int from, int to) {
  std::string s;
  for (int i = from; i <= to; ++i) {
    s += std::to_string(i) + ". Q: Question number " + std::to_string(i) + "?\n";
    s += "   A: Answer " + std::to_string(i) + "\n";
  }
  return s;
}

DocumentRecord Doc() {
  DocumentRecord d;
  d.doc_id = "doc-7";
  d.channels["native"] = "First sentence here. Second one follows. A third closes it.";
  return d;
}

// Records every request and replies from a fixed list.
class Recorder final : public GenerationProvider {
 public:
  explicit Recorder(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string identity() const override { return "recorder"; }
  std::vector<GenerationRequest> seen;

 protected:
  std::string DoComplete(const GenerationRequest& r) override {
    seen.push_back(r);
    return replies_.at(seen.size() - 1);
  }

 private:
  std::vector<std::string> replies_;
};

}  // namespace

TEST_CASE("parse numbered list") {
  const auto qs = ParseQaList(Numbered(1, 3));
  REQUIRE(qs.size() == 3);
  CHECK(qs[1].question == "Question number 2?");
  CHECK(qs[1].answer == "Answer 2");
}

TEST_CASE("parse prefers the fenced block and tolerates labels") {
  const std::string text =
      "Sure! Here you go:\n```\nQuestion: What is inside?\nAnswer: The fence\n"
      "that continues here.\n```\nQ: Outside?\nA: ignored";
  const auto qs = ParseQaList(text);
  REQUIRE(qs.size() == 1);
  CHECK(qs[0].question == "What is inside?");
  CHECK(qs[0].answer.find("continues here") != std::string::npos);
}

TEST_CASE("malformed output keeps the raw payload") {
  try {
    ParseQaList("I cannot help with that.");
    FAIL("expected error");
  } catch (const UnparseableOutputError& e) {
    CHECK(e.raw() == "I cannot help with that.");
    CHECK(e.kind() == ErrorKind::kProvider);
  }
}

TEST_CASE("scripted pairs are stamped with the doc id") {
  MockScript s;
  s.qa_replies = {Numbered(1, 10)};
  MockGenerator g(s);
  QaGenOptions opts;
  opts.pairs = 10;
  const auto pairs = GenerateQaPairs(g, Doc(), "native", opts);
  REQUIRE(pairs.size() == 10);
  for (const auto& p : pairs) CHECK(p.doc_id == "doc-7");
  CHECK(g.calls() == 1);
}

TEST_CASE("duplicates trigger one re-ask") {
  Recorder r({"1. Q: Same?\nA: one\n2. Q: Same?\nA: two\n3. Q: Other?\nA: three\n",
              "1. Q: Fresh?\nA: four\n"});
  QaGenOptions opts;
  opts.pairs = 3;
  const auto pairs = GenerateQaPairs(r, Doc(), "native", opts);
  CHECK(pairs.size() == 3);
  REQUIRE(r.seen.size() == 2);
  // The re-ask lists the questions already obtained.
  const std::string reask = r.seen[1].messages.back().content;
  CHECK(reask.find("Same?") != std::string::npos);
  CHECK(reask.find("Other?") != std::string::npos);
}

TEST_CASE("exhausted re-asks give a partial result") {
  Recorder r({"Q: Only?\nA: one\n", "Q: Only?\nA: again\n"});
  QaGenOptions opts;
  opts.pairs = 2;
  opts.max_reasks = 1;
  try {
    GenerateQaPairs(r, Doc(), "native", opts);
    FAIL("expected error");
  } catch (const PartialResultError& e) {
    CHECK(e.obtained().size() == 1);
  }
}

TEST_CASE("extractive qa fallback is usable") {
  MockGenerator g(MockScript{});
  QaGenOptions opts;
  opts.pairs = 3;
  const auto pairs = GenerateQaPairs(g, Doc(), "native", opts);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[1].reference_answer == "Second one follows.");
}

TEST_CASE("scripted answers keyed by question and context") {
  MockScript s;
  s.answers.push_back({"Where?", {"ctx A"}, true, "from A"});
  s.answers.push_back({"Where?", {}, false, "anywhere"});
  s.fallback = MockScript::Fallback::kError;
  MockGenerator g(s);
  CHECK(GenerateAnswer(g, "Where?", {"ctx A"}).text == "from A");
  CHECK(GenerateAnswer(g, "Where?", {"ctx B"}).text == "anywhere");
  CHECK(testutil::KindOf([&] { GenerateAnswer(g, "Who?", {"ctx"}); }) ==
        ErrorKind::kProvider);
}

TEST_CASE("extractive answer picks the best sentence") {
  MockGenerator g(MockScript{});
  const auto a = GenerateAnswer(g, "What colour is the sky?",
                                {"Grass is green. The sky is blue today.", "Unrelated."});
  CHECK(a.text == "The sky is blue today.");
}

TEST_CASE("empty context uses the question-only prompt") {
  Recorder r({"guess"});
  const auto a = GenerateAnswer(r, "Anything?", {});
  CHECK(a.no_context);
  CHECK(a.text == "guess");
  const std::string prompt = r.seen[0].messages.back().content;
  CHECK(prompt.find("Anything?") != std::string::npos);
  CHECK(prompt == PromptTemplates::Render(PromptTemplates::Defaults().answer_no_context,
                                          {{"question", "Anything?"}}));
}

TEST_CASE("context budget truncates the lowest ranked first") {
  Recorder r({"ok"});
  AnswerOptions opts;
  opts.context_token_budget = 5;
  const auto a = GenerateAnswer(r, "q", {"one two three", "four five six seven", "eight"}, opts);
  CHECK(a.truncated_contexts == 2);
  CHECK(a.dropped_tokens == 3);
  REQUIRE(r.seen[0].context.size() == 2);
  CHECK(r.seen[0].context[0] == "one two three");
  CHECK(r.seen[0].context[1] == "four five");
}

TEST_CASE("empty completion is a provider error") {
  Recorder r({""});
  CHECK(testutil::KindOf([&] { GenerateAnswer(r, "q", {"c"}); }) == ErrorKind::kProvider);
}

TEST_CASE("outage after n calls") {
  MockScript s;
  s.fail_after_calls = 2;
  MockGenerator g(s);
  GenerateAnswer(g, "a?", {"x."});
  GenerateAnswer(g, "b?", {"y."});
  CHECK(testutil::KindOf([&] { GenerateAnswer(g, "c?", {"z."}); }) == ErrorKind::kProvider);
}

TEST_CASE("template rendering") {
  CHECK(PromptTemplates::Render("{{a}} and {{b}} {{c}}", {{"a", "1"}, {"b", "2"}}) ==
        "1 and 2 {{c}}");
  CHECK(CountTokens("  a b\tc\n") == 3);
}

TEST_CASE("mock script file") {
  testutil::TempDir dir;
  testutil::WriteFile(dir / "s.json",
                      R"({"answers":[{"question":"q","answer":"a"}],"fallback":"error"})");
  const auto s = MockScript::FromFile(dir / "s.json");
  CHECK(s.answers.size() == 1);
  CHECK(s.fallback == MockScript::Fallback::kError);
  testutil::WriteFile(dir / "bad.json", R"({"answer":[]})");
  CHECK(testutil::KindOf([&] { MockScript::FromFile(dir / "bad.json"); }) ==
        ErrorKind::kConfig);
}

TEST_CASE("shipped prompt files match the built-in templates") {
  const std::filesystem::path dir = RAGBENCH_SOURCE_DIR "/prompts";
  const auto d = PromptTemplates::Defaults();
  CHECK(testutil::ReadFile(dir / "qa_pairs.txt") == d.qa_pairs);
  CHECK(testutil::ReadFile(dir / "qa_reask.txt") == d.qa_reask);
  CHECK(testutil::ReadFile(dir / "answer.txt") == d.answer);
  CHECK(testutil::ReadFile(dir / "answer_no_context.txt") == d.answer_no_context);
}
