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

#include "ragbench/radar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ragbench/error.hpp"

namespace ragbench {
namespace {

double Clip(double v) { return std::clamp(v, 0.0, 10.0); }

using Getter = std::optional<double> RadarInput::*;
using Setter = std::optional<AxisScore> RadarScores::*;

void ZAxis(std::span<const RadarInput> in, std::vector<RadarScores>& out,
           Getter get, Setter set, const char* name, StdMode mode,
           std::vector<std::string>& warnings) {
  std::vector<double> values;
  for (const auto& a : in) {
    if (a.*get) values.push_back(*(a.*get));
  }
  if (values.empty()) return;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double denom = mode == StdMode::kPopulation ? n : n - 1.0;
  const double sd = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
  const bool degenerate = values.size() < 2 || !(sd > 0.0);
  if (degenerate) {
    warnings.push_back(std::string(name) +
                       ": degenerate population (fewer than two arms or zero "
                       "spread); every arm scored 10");
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!(in[i].*get)) continue;
    const double raw = degenerate ? 10.0 : 10.0 * (*(in[i].*get) - mean) / sd;
    out[i].*set = AxisScore{raw, Clip(raw)};
  }
}

void RatioAxis(std::span<const RadarInput> in, std::vector<RadarScores>& out,
               Getter get, Setter set, const char* name) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& a : in) {
    if (!(a.*get)) continue;
    if (*(a.*get) < 0.0)
      throw InvalidArgument(std::string(name) + " inputs must be non-negative");
    lo = std::min(lo, *(a.*get));
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!(in[i].*get)) continue;
    const double x = *(in[i].*get);
    // The minimum scores exactly 10, also when it is 0.
    const double raw = x == lo ? 10.0 : 10.0 * lo / x;
    out[i].*set = AxisScore{raw, Clip(raw)};
  }
}

}  // namespace

RadarResult RadarScoresFor(std::span<const RadarInput> arms, StdMode mode) {
  RadarResult result;
  if (arms.empty()) return result;
  result.arms.resize(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) result.arms[i].arm = arms[i].arm;
  ZAxis(arms, result.arms, &RadarInput::mrr_clean, &RadarScores::clean_retrieval,
        "clean_retrieval", mode, result.warnings);
  ZAxis(arms, result.arms, &RadarInput::mrr_noisy, &RadarScores::noisy_retrieval,
        "noisy_retrieval", mode, result.warnings);
  ZAxis(arms, result.arms, &RadarInput::rouge_l_total,
        &RadarScores::semantic_quality, "semantic_quality", mode,
        result.warnings);
  RatioAxis(arms, result.arms, &RadarInput::latency_seconds,
            &RadarScores::processing_speed, "processing_speed");
  RatioAxis(arms, result.arms, &RadarInput::memory_per_1k_docs,
            &RadarScores::memory_efficiency, "memory_efficiency");
  return result;
}

}  // namespace ragbench
