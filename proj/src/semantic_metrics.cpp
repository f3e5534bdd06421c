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

#include "ragbench/semantic_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ragbench/error.hpp"

namespace ragbench {
namespace {

// Decodes one UTF-8 sequence at s[i]; invalid bytes decode as themselves.
char32_t DecodeAt(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t off) -> int {
    if (i + off >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + off]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return b0;
  }
  for (int k = 1; k < len; ++k) {
    const int c = cont(static_cast<std::size_t>(k));
    if (c < 0) {
      ++i;
      return b0;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

void AppendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool IsSeparator(char32_t c) {
  if (c < 0x80) {
    return c == ' ' || (c >= '\t' && c <= '\r') || (c >= 0x21 && c <= 0x2F) ||
           (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  if (c == 0xA0 || c == 0x1680 || c == 0xD7 || c == 0xF7) return true;
  if (c >= 0xA1 && c <= 0xBF) {
    // Keep the Latin-1 letters and digits in this range.
    return c != 0xAA && c != 0xB2 && c != 0xB3 && c != 0xB5 && c != 0xB9 &&
           c != 0xBA && !(c >= 0xBC && c <= 0xBE);
  }
  return (c >= 0x2000 && c <= 0x206F) || (c >= 0x3000 && c <= 0x303F) ||
         (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) ||
         (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65);
}

char32_t ToLower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

std::map<std::vector<std::string>, std::size_t> NgramCounts(
    std::span<const std::string> toks, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i)
    ++counts[std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                      toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

std::size_t ClippedOverlap(std::span<const std::string> a,
                           std::span<const std::string> r, std::size_t n) {
  const auto ca = NgramCounts(a, n);
  const auto cr = NgramCounts(r, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : ca) {
    auto it = cr.find(gram);
    if (it != cr.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

}  // namespace

TokenSeq Normalize(std::string_view text) {
  TokenSeq tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = DecodeAt(text, i);
    if (IsSeparator(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      AppendUtf8(current, ToLower(c));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool ExactMatch(const AnswerPair& pair) {
  return Normalize(pair.generated) == Normalize(pair.reference);
}

double ExactMatch(std::span<const AnswerPair> pairs) {
  if (pairs.empty()) throw InvalidArgument("exact match over an empty list");
  std::size_t hits = 0;
  for (const auto& p : pairs) hits += ExactMatch(p) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double BleuTokens(std::span<const std::string> a,
                  std::span<const std::string> r, const SemanticOptions& opts) {
  if (r.empty()) throw InvalidArgument("BLEU needs a non-empty reference");
  if (a.empty()) return 0.0;
  constexpr std::size_t kMaxOrder = 4;
  double log_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    double total = a.size() >= n ? static_cast<double>(a.size() - n + 1) : 0.0;
    if (total == 0.0 && !opts.bleu_strict) continue;
    double matched = total > 0.0 ? static_cast<double>(ClippedOverlap(a, r, n)) : 0.0;
    if (opts.bleu_smoothing) {
      matched += 1.0;
      total += 1.0;
    }
    if (matched == 0.0) return 0.0;
    log_sum += std::log(matched / total);
    ++orders;
  }
  const double len_a = static_cast<double>(a.size());
  const double len_r = static_cast<double>(r.size());
  const double bp = std::min(1.0, std::exp(1.0 - len_r / len_a));
  return bp * std::exp(log_sum / static_cast<double>(orders));
}

double Rouge1Tokens(std::span<const std::string> a,
                    std::span<const std::string> r, const SemanticOptions& opts) {
  if (r.empty()) throw InvalidArgument("ROUGE-1 needs a non-empty reference");
  const double overlap = static_cast<double>(ClippedOverlap(a, r, 1));
  const double recall = overlap / static_cast<double>(r.size());
  if (!opts.rouge1_f_measure) return recall;
  if (a.empty() || overlap == 0.0) return 0.0;
  const double precision = overlap / static_cast<double>(a.size());
  return 2.0 * precision * recall / (precision + recall);
}

double RougeLTokens(std::span<const std::string> a,
                    std::span<const std::string> r, bool* undefined) {
  if (undefined) *undefined = false;
  if (a.empty() && r.empty()) {
    if (undefined) *undefined = true;
    return 0.0;
  }
  constexpr double kBeta2 = 1.0;
  const double lcs = static_cast<double>(LcsLength(a, r));
  return (1.0 + kBeta2) * lcs /
         (static_cast<double>(a.size()) + kBeta2 * static_cast<double>(r.size()));
}

double Bleu(const AnswerPair& pair, const SemanticOptions& opts) {
  return BleuTokens(Normalize(pair.generated), Normalize(pair.reference), opts);
}

double Rouge1(const AnswerPair& pair, const SemanticOptions& opts) {
  return Rouge1Tokens(Normalize(pair.generated), Normalize(pair.reference), opts);
}

double RougeL(const AnswerPair& pair, bool* undefined) {
  return RougeLTokens(Normalize(pair.generated), Normalize(pair.reference),
                      undefined);
}

SemanticScores ScorePair(const AnswerPair& pair, const SemanticOptions& opts,
                         bool* rouge_l_undefined) {
  const TokenSeq a = Normalize(pair.generated);
  const TokenSeq r = Normalize(pair.reference);
  if (r.empty()) {
    throw InvalidArgument("reference of " + pair.query_id +
                          " has no tokens after normalization");
  }
  SemanticScores s;
  s.exact_match = a == r ? 1.0 : 0.0;
  s.bleu = BleuTokens(a, r, opts);
  s.rouge1 = Rouge1Tokens(a, r, opts);
  s.rouge_l = RougeLTokens(a, r, rouge_l_undefined);
  return s;
}

SemanticSummary SemanticReport(std::span<const AnswerPair> pairs,
                               const SemanticOptions& opts) {
  if (pairs.empty()) throw InvalidArgument("semantic report over an empty list");
  SemanticSummary out;
  out.count = pairs.size();
  for (const auto& p : pairs) {
    bool undefined = false;
    const auto s = ScorePair(p, opts, &undefined);
    out.mean.exact_match += s.exact_match;
    out.mean.bleu += s.bleu;
    out.mean.rouge1 += s.rouge1;
    out.mean.rouge_l += s.rouge_l;
    out.undefined_rouge_l += undefined ? 1 : 0;
  }
  const double n = static_cast<double>(pairs.size());
  out.mean.exact_match /= n;
  out.mean.bleu /= n;
  out.mean.rouge1 /= n;
  out.mean.rouge_l /= n;
  return out;
}

}  // namespace ragbench
