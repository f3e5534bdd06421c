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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ragbench {

// Tokenizer version echoed into reports; bump on any change to Normalize.
inline constexpr const char* kTokenizerVersion = "lower-nopunct-ws/1";

using TokenSeq = std::vector<std::string>;

// Lowercases (ASCII and Latin-1 letters), turns punctuation (ASCII,
// Latin-1, General Punctuation, CJK and fullwidth punctuation) into
// separators and splits on whitespace runs.
TokenSeq Normalize(std::string_view text);

struct AnswerPair {
  std::string query_id;
  std::string generated;
  std::string reference;
};

struct SemanticOptions {
  // Adds one to matched and total counts of every n-gram order.
  bool bleu_smoothing = false;
  // Treat orders the candidate is too short for as zero precision.
  bool bleu_strict = false;
  // F-measure instead of recall (divide by |r|) for ROUGE-1.
  bool rouge1_f_measure = false;
};

// Longest common subsequence length, token-wise, by dynamic programming.
std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b);

bool ExactMatch(const AnswerPair& pair);
double ExactMatch(std::span<const AnswerPair> pairs);

// Throw InvalidArgument when the reference is empty.
double Bleu(const AnswerPair& pair, const SemanticOptions& opts = {});
double Rouge1(const AnswerPair& pair, const SemanticOptions& opts = {});

// 2*LCS/(|a|+|r|). Both sides empty yields 0 and sets *undefined when given.
double RougeL(const AnswerPair& pair, bool* undefined = nullptr);

// Token-level forms used by the string overloads above.
double BleuTokens(std::span<const std::string> generated,
                  std::span<const std::string> reference,
                  const SemanticOptions& opts = {});
double Rouge1Tokens(std::span<const std::string> generated,
                    std::span<const std::string> reference,
                    const SemanticOptions& opts = {});
double RougeLTokens(std::span<const std::string> generated,
                    std::span<const std::string> reference,
                    bool* undefined = nullptr);

struct SemanticScores {
  double exact_match = 0.0;
  double bleu = 0.0;
  double rouge1 = 0.0;
  double rouge_l = 0.0;
};

SemanticScores ScorePair(const AnswerPair& pair, const SemanticOptions& opts = {},
                         bool* rouge_l_undefined = nullptr);

struct SemanticSummary {
  std::size_t count = 0;
  SemanticScores mean;
  // Pairs whose ROUGE-L was undefined (both sides empty) and scored 0.
  std::size_t undefined_rouge_l = 0;
};

// Arithmetic means over pairs. Throws InvalidArgument on an empty list.
SemanticSummary SemanticReport(std::span<const AnswerPair> pairs,
                               const SemanticOptions& opts = {});

}  // namespace ragbench
