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

#include <atomic>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "ragbench/corpus.hpp"
#include "ragbench/embed.hpp"
#include "ragbench/error.hpp"

namespace ragbench {

struct ChatMessage {
  std::string role;
  std::string content;
};

enum class GenerationTask { kQaPairs, kAnswer };

// Rendered messages for remote providers plus the structured inputs they were
// rendered from, which the mock provider keys on.
struct GenerationRequest {
  GenerationTask task = GenerationTask::kAnswer;
  std::vector<ChatMessage> messages;
  // kAnswer
  std::string question;
  std::vector<std::string> context;
  // kQaPairs
  std::string doc_id;
  std::string source_text;
  std::size_t pairs_wanted = 0;
};

class GenerationProvider {
 public:
  virtual ~GenerationProvider() = default;
  virtual std::string identity() const = 0;

  // Thread-safe; counts calls.
  std::string Complete(const GenerationRequest& request);
  std::size_t calls() const { return calls_.load(); }

 protected:
  virtual std::string DoComplete(const GenerationRequest& request) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
};

// Chat-completions client: {"model","messages","temperature","max_tokens"}
// -> choices[0].message.content.
class RemoteGenerator final : public GenerationProvider {
 public:
  RemoteGenerator(RemoteEndpoint endpoint, double temperature, int max_tokens);
  std::string identity() const override;

 protected:
  std::string DoComplete(const GenerationRequest& request) override;

 private:
  RemoteEndpoint endpoint_;
  double temperature_;
  int max_tokens_;
};

struct MockScript {
  struct Answer {
    std::string question;
    // Matched exactly when non-empty; otherwise any context matches.
    std::vector<std::string> context;
    bool match_context = false;
    std::string answer;
  };
  enum class Fallback {
    // Answers with the context sentence sharing the most tokens with the
    // question; Q&A requests get pairs built from the source sentences.
    kExtractive,
    kError,
  };

  std::vector<Answer> answers;
  // Raw replies returned, in order, to Q&A generation requests.
  std::vector<std::string> qa_replies;
  Fallback fallback = Fallback::kExtractive;
  // Simulated outage: every call after this many fails. 0 disables.
  std::size_t fail_after_calls = 0;

  static MockScript FromFile(const std::filesystem::path& path);
};

// Deterministic scripted provider. Answer lookups are pure; Q&A replies are
// consumed in call order.
class MockGenerator final : public GenerationProvider {
 public:
  explicit MockGenerator(MockScript script);
  std::string identity() const override;

 protected:
  std::string DoComplete(const GenerationRequest& request) override;

 private:
  MockScript script_;
  std::mutex mu_;
  std::deque<std::string> pending_qa_;
  std::size_t served_ = 0;
};

struct PromptTemplates {
  std::string qa_pairs;
  std::string qa_reask;
  std::string answer;
  std::string answer_no_context;

  static PromptTemplates Defaults();
  // Replaces every {{name}} placeholder; unknown placeholders are left as-is.
  static std::string Render(
      const std::string& tmpl,
      const std::vector<std::pair<std::string, std::string>>& vars);
};

// Thrown when the provider's reply holds no parseable pair.
class UnparseableOutputError : public Error {
 public:
  UnparseableOutputError(const std::string& what, std::string raw)
      : Error(ErrorKind::kProvider, what), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// Thrown when fewer than the requested unique pairs were obtained.
class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& what, std::vector<QAPair> obtained)
      : Error(ErrorKind::kProvider, what), obtained_(std::move(obtained)) {}
  const std::vector<QAPair>& obtained() const { return obtained_; }

 private:
  std::vector<QAPair> obtained_;
};

struct QuestionAnswer {
  std::string question;
  std::string answer;
};

// Tolerant parser for numbered "Q:/A:" lists, preferring the first fenced
// block when one exists. Throws UnparseableOutputError when nothing parses.
std::vector<QuestionAnswer> ParseQaList(const std::string& text);

struct QaGenOptions {
  std::size_t pairs = 10;
  // Extra requests allowed when duplicates leave fewer than `pairs`.
  std::size_t max_reasks = 3;
  PromptTemplates prompts = PromptTemplates::Defaults();
};

std::vector<QAPair> GenerateQaPairs(GenerationProvider& provider,
                                    const DocumentRecord& doc,
                                    const std::string& channel,
                                    const QaGenOptions& opts = {});

struct AnswerOptions {
  // Whitespace tokens of context allowed in the prompt; 0 means unlimited.
  std::size_t context_token_budget = 0;
  PromptTemplates prompts = PromptTemplates::Defaults();
};

struct GeneratedAnswer {
  std::string text;
  bool no_context = false;
  // Contexts cut short or dropped to fit the budget.
  std::size_t truncated_contexts = 0;
  std::size_t dropped_tokens = 0;
};

// Context is in rank order; truncation removes tokens from the tail, so the
// lowest-ranked context goes first.
GeneratedAnswer GenerateAnswer(GenerationProvider& provider,
                               const std::string& question,
                               const std::vector<std::string>& context,
                               const AnswerOptions& opts = {});

std::size_t CountTokens(const std::string& text);

}  // namespace ragbench
