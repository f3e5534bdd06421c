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

#include "ragbench/qa_gen.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "http_json.hpp"
#include "ragbench/json_fwd.hpp"
#include "ragbench/semantic_metrics.hpp"

namespace ragbench {
namespace {

constexpr const char* kSystemPrompt =
    "You are a careful assistant for document question answering.";

constexpr const char* kQaPairsTemplate = R"(Read the document below and write {{n}} question-answer pairs about specific factual details it contains. Paraphrase; do not copy sentences verbatim from the document. Every question must be answerable from the document alone.

Return the pairs inside one fenced block, numbered, in exactly this form:
```
1. Q: <question>
   A: <answer>
```

Document:
{{document}}
)";

constexpr const char* kQaReaskTemplate = R"(These questions were already written for the document below:
{{existing}}

Write {{n}} more question-answer pairs about the document whose questions differ from every question above. Use the same numbered fenced form:
```
1. Q: <question>
   A: <answer>
```

Document:
{{document}}
)";

constexpr const char* kAnswerTemplate = R"(Answer the question using the numbered context passages, which are ordered from most to least relevant. Reply with the answer only.

Context:
{{context}}

Question: {{question}}
Answer:)";

constexpr const char* kAnswerNoContextTemplate = R"(Answer the question. Reply with the answer only.

Question: {{question}}
Answer:)";

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitSentences(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      if (!Trim(cur).empty()) out.push_back(Trim(cur));
      cur.clear();
      continue;
    }
    cur.push_back(c);
    const bool end = c == '.' || c == '!' || c == '?';
    if (end && (i + 1 == text.size() || text[i + 1] == ' ' ||
                text[i + 1] == '\n' || text[i + 1] == '\t')) {
      if (!Trim(cur).empty()) out.push_back(Trim(cur));
      cur.clear();
    }
  }
  if (!Trim(cur).empty()) out.push_back(Trim(cur));
  return out;
}

// First `n` whitespace tokens of `text`, original spacing kept.
std::string FirstTokens(const std::string& text, std::size_t n) {
  std::size_t seen = 0;
  std::size_t i = 0;
  std::size_t end = 0;
  while (i < text.size() && seen < n) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    end = i;
    ++seen;
  }
  return text.substr(0, end);
}

std::string RenderContext(const std::vector<std::string>& context) {
  std::string out;
  for (std::size_t i = 0; i < context.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += "[" + std::to_string(i + 1) + "] " + context[i];
  }
  return out;
}

std::string ExtractiveAnswer(const GenerationRequest& req) {
  const TokenSeq q = Normalize(req.question);
  const std::set<std::string> qset(q.begin(), q.end());
  std::string best;
  std::size_t best_score = 0;
  for (const auto& ctx : req.context) {
    for (const auto& sentence : SplitSentences(ctx)) {
      std::set<std::string> toks;
      for (auto& t : Normalize(sentence)) toks.insert(std::move(t));
      std::size_t score = 0;
      for (const auto& t : toks) score += qset.count(t);
      if (score > best_score) {
        best_score = score;
        best = sentence;
      }
    }
  }
  return best.empty() ? std::string("unknown") : best;
}

std::string ExtractiveQaReply(const GenerationRequest& req) {
  std::ostringstream out;
  out << "```\n";
  std::size_t written = 0;
  for (const auto& sentence : SplitSentences(req.source_text)) {
    if (written == req.pairs_wanted) break;
    ++written;
    out << written << ". Q: Which statement in the document begins with \""
        << FirstTokens(sentence, 5) << "\"?\n   A: " << sentence << "\n";
  }
  out << "```\n";
  return out.str();
}

}  // namespace

std::string GenerationProvider::Complete(const GenerationRequest& request) {
  calls_.fetch_add(1, std::memory_order_relaxed);
  return DoComplete(request);
}

RemoteGenerator::RemoteGenerator(RemoteEndpoint endpoint, double temperature,
                                 int max_tokens)
    : endpoint_(std::move(endpoint)),
      temperature_(temperature),
      max_tokens_(max_tokens) {
  if (endpoint_.url.empty()) throw ConfigError("remote generator needs a url");
}

std::string RemoteGenerator::identity() const {
  std::ostringstream s;
  s << "remote(url=" << endpoint_.url << ",model=" << endpoint_.model
    << ",temperature=" << temperature_ << ",max_tokens=" << max_tokens_ << ")";
  return s.str();
}

std::string RemoteGenerator::DoComplete(const GenerationRequest& request) {
  Json body;
  body["model"] = endpoint_.model;
  body["messages"] = Json::array();
  for (const auto& m : request.messages)
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  body["temperature"] = temperature_;
  body["max_tokens"] = max_tokens_;
  const Json res = detail::PostJson(endpoint_, body);
  try {
    return res.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception& e) {
    throw ProviderError("malformed chat completion response: " +
                        std::string(e.what()));
  }
}

MockScript MockScript::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mock script " + path.string());
  MockScript script;
  try {
    const Json j = Json::parse(in);
    for (const auto& [key, _] : j.items()) {
      if (key != "answers" && key != "qa_replies" && key != "fallback" &&
          key != "fail_after_calls") {
        throw ConfigError("mock script " + path.string() + ": unknown key \"" +
                          key + "\"");
      }
    }
    if (j.contains("answers")) {
      for (const auto& a : j.at("answers")) {
        Answer ans;
        ans.question = a.at("question").get<std::string>();
        ans.answer = a.at("answer").get<std::string>();
        if (a.contains("context")) {
          ans.context = a.at("context").get<std::vector<std::string>>();
          ans.match_context = true;
        }
        script.answers.push_back(std::move(ans));
      }
    }
    if (j.contains("qa_replies"))
      script.qa_replies = j.at("qa_replies").get<std::vector<std::string>>();
    if (j.contains("fallback")) {
      const auto f = j.at("fallback").get<std::string>();
      if (f == "extractive") {
        script.fallback = Fallback::kExtractive;
      } else if (f == "error") {
        script.fallback = Fallback::kError;
      } else {
        throw ConfigError("mock script fallback must be extractive or error");
      }
    }
    if (j.contains("fail_after_calls"))
      script.fail_after_calls = j.at("fail_after_calls").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw ConfigError("mock script " + path.string() + ": " + e.what());
  }
  return script;
}

MockGenerator::MockGenerator(MockScript script) : script_(std::move(script)) {
  pending_qa_.assign(script_.qa_replies.begin(), script_.qa_replies.end());
}

std::string MockGenerator::identity() const {
  return "mock(answers=" + std::to_string(script_.answers.size()) +
         ",qa_replies=" + std::to_string(script_.qa_replies.size()) +
         ",fallback=" +
         (script_.fallback == MockScript::Fallback::kExtractive ? "extractive"
                                                                : "error") +
         ")";
}

std::string MockGenerator::DoComplete(const GenerationRequest& request) {
  {
    std::lock_guard lock(mu_);
    if (script_.fail_after_calls > 0 && served_ >= script_.fail_after_calls)
      throw ProviderError("mock provider outage after " +
                          std::to_string(served_) + " calls");
    ++served_;
    if (request.task == GenerationTask::kQaPairs && !pending_qa_.empty()) {
      std::string reply = std::move(pending_qa_.front());
      pending_qa_.pop_front();
      return reply;
    }
  }
  if (request.task == GenerationTask::kAnswer) {
    for (const auto& a : script_.answers) {
      if (a.question == request.question &&
          (!a.match_context || a.context == request.context))
        return a.answer;
    }
  }
  if (script_.fallback == MockScript::Fallback::kError)
    throw ProviderError("mock provider has no scripted reply");
  return request.task == GenerationTask::kAnswer ? ExtractiveAnswer(request)
                                                 : ExtractiveQaReply(request);
}

PromptTemplates PromptTemplates::Defaults() {
  return {kQaPairsTemplate, kQaReaskTemplate, kAnswerTemplate,
          kAnswerNoContextTemplate};
}

std::string PromptTemplates::Render(
    const std::string& tmpl,
    const std::vector<std::pair<std::string, std::string>>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const auto open = tmpl.find("{{", i);
    if (open == std::string::npos) break;
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string::npos) break;
    out.append(tmpl, i, open - i);
    const std::string name = tmpl.substr(open + 2, close - open - 2);
    auto it = std::find_if(vars.begin(), vars.end(),
                           [&](const auto& v) { return v.first == name; });
    if (it != vars.end()) {
      out += it->second;
    } else {
      out.append(tmpl, open, close + 2 - open);
    }
    i = close + 2;
  }
  out.append(tmpl, std::min(i, tmpl.size()), std::string::npos);
  return out;
}

std::vector<QuestionAnswer> ParseQaList(const std::string& text) {
  std::string body = text;
  const auto fence = text.find("```");
  if (fence != std::string::npos) {
    const auto line_end = text.find('\n', fence);
    const auto close =
        line_end == std::string::npos ? std::string::npos : text.find("```", line_end);
    if (line_end != std::string::npos) {
      body = text.substr(line_end + 1, close == std::string::npos
                                           ? std::string::npos
                                           : close - line_end - 1);
    }
  }
  static const std::regex q_re(
      R"(^\s*(?:\d+\s*[.)]\s*)?[*_]*(?:Q|Question)\s*\d*\s*[*_]*\s*[:.)-]\s*[*_]*\s*(.*)$)",
      std::regex::icase);
  static const std::regex a_re(
      R"(^\s*(?:\d+\s*[.)]\s*)?[*_]*(?:A|Answer)\s*\d*\s*[*_]*\s*[:.)-]\s*[*_]*\s*(.*)$)",
      std::regex::icase);

  std::vector<QuestionAnswer> out;
  QuestionAnswer cur;
  enum { kNone, kQuestion, kAnswer } state = kNone;
  auto flush = [&] {
    cur.question = Trim(cur.question);
    cur.answer = Trim(cur.answer);
    if (!cur.question.empty() && !cur.answer.empty()) out.push_back(cur);
    cur = {};
    state = kNone;
  };
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_match(line, m, q_re)) {
      flush();
      cur.question = m[1].str();
      state = kQuestion;
    } else if (state != kNone && std::regex_match(line, m, a_re)) {
      cur.answer = m[1].str();
      state = kAnswer;
    } else if (!Trim(line).empty()) {
      if (state == kQuestion) cur.question += " " + Trim(line);
      if (state == kAnswer) cur.answer += " " + Trim(line);
    }
  }
  flush();
  if (out.empty()) {
    throw UnparseableOutputError(
        "no question/answer pairs found in provider output", text);
  }
  return out;
}

std::vector<QAPair> GenerateQaPairs(GenerationProvider& provider,
                                    const DocumentRecord& doc,
                                    const std::string& channel,
                                    const QaGenOptions& opts) {
  if (opts.pairs < 1) throw InvalidArgument("need at least one pair");
  auto it = doc.channels.find(channel);
  if (it == doc.channels.end() || Trim(it->second).empty()) {
    throw DataError("document \"" + doc.doc_id + "\" has no text in channel \"" +
                    channel + "\"");
  }
  const std::string& source = it->second;

  std::vector<QAPair> out;
  std::set<std::string> seen;
  for (std::size_t attempt = 0; attempt <= opts.max_reasks; ++attempt) {
    GenerationRequest req;
    req.task = GenerationTask::kQaPairs;
    req.doc_id = doc.doc_id;
    req.source_text = source;
    req.pairs_wanted = opts.pairs - out.size();
    std::string prompt;
    if (attempt == 0) {
      prompt = PromptTemplates::Render(
          opts.prompts.qa_pairs,
          {{"n", std::to_string(req.pairs_wanted)}, {"document", source}});
    } else {
      std::string existing;
      for (const auto& p : out) existing += "- " + p.question + "\n";
      prompt = PromptTemplates::Render(
          opts.prompts.qa_reask, {{"n", std::to_string(req.pairs_wanted)},
                                  {"existing", existing},
                                  {"document", source}});
    }
    req.messages = {{"system", kSystemPrompt}, {"user", prompt}};
    for (auto& qa : ParseQaList(provider.Complete(req))) {
      if (out.size() == opts.pairs) break;
      if (seen.insert(qa.question).second)
        out.push_back({doc.doc_id, std::move(qa.question), std::move(qa.answer)});
    }
    if (out.size() == opts.pairs) return out;
  }
  throw PartialResultError("obtained " + std::to_string(out.size()) + " of " +
                               std::to_string(opts.pairs) +
                               " unique pairs for \"" + doc.doc_id + "\"",
                           std::move(out));
}

std::size_t CountTokens(const std::string& text) {
  std::istringstream in(text);
  std::size_t n = 0;
  std::string tok;
  while (in >> tok) ++n;
  return n;
}

GeneratedAnswer GenerateAnswer(GenerationProvider& provider,
                               const std::string& question,
                               const std::vector<std::string>& context,
                               const AnswerOptions& opts) {
  if (Trim(question).empty()) throw InvalidArgument("empty question");
  GeneratedAnswer result;
  std::vector<std::string> kept;
  std::size_t used = 0;
  for (const auto& ctx : context) {
    const std::size_t tokens = CountTokens(ctx);
    if (opts.context_token_budget == 0 ||
        used + tokens <= opts.context_token_budget) {
      kept.push_back(ctx);
      used += tokens;
      continue;
    }
    const std::size_t room = opts.context_token_budget - used;
    ++result.truncated_contexts;
    result.dropped_tokens += tokens - room;
    if (room > 0) kept.push_back(FirstTokens(ctx, room));
    used = opts.context_token_budget;
  }

  GenerationRequest req;
  req.task = GenerationTask::kAnswer;
  req.question = question;
  req.context = kept;
  std::string prompt;
  if (kept.empty()) {
    result.no_context = true;
    prompt = PromptTemplates::Render(opts.prompts.answer_no_context,
                                     {{"question", question}});
  } else {
    prompt = PromptTemplates::Render(
        opts.prompts.answer,
        {{"context", RenderContext(kept)}, {"question", question}});
  }
  req.messages = {{"system", kSystemPrompt}, {"user", prompt}};
  result.text = Trim(provider.Complete(req));
  if (result.text.empty()) throw ProviderError("empty completion for answer");
  return result;
}

}  // namespace ragbench
