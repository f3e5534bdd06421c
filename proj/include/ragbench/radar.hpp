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

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ragbench {

enum class StdMode { kPopulation, kSample };

// Raw inputs for one arm. Missing values leave the matching axis empty.
struct RadarInput {
  std::string arm;
  std::optional<double> mrr_clean;      // MRR at degradation level 0
  std::optional<double> mrr_noisy;      // MRR at degradation level 3
  std::optional<double> rouge_l_total;  // question-weighted ROUGE-L
  std::optional<double> latency_seconds;
  std::optional<double> memory_per_1k_docs;
};

struct AxisScore {
  double raw = 0.0;    // before clipping
  double score = 0.0;  // clipped to [0, 10]
};

struct RadarScores {
  std::string arm;
  std::optional<AxisScore> clean_retrieval;
  std::optional<AxisScore> noisy_retrieval;
  std::optional<AxisScore> semantic_quality;
  std::optional<AxisScore> processing_speed;
  std::optional<AxisScore> memory_efficiency;
};

struct RadarResult {
  std::vector<RadarScores> arms;
  std::vector<std::string> warnings;
};

// Axes 1-3: 10 * (x - mean) / sd across arms, with sd population or sample
// per `mode`; a degenerate population (fewer than two values, or sd = 0)
// scores 10 and adds a warning. Axes 4-5: 10 * min / x (lower is better).
// Every axis is clipped to [0, 10].
RadarResult RadarScoresFor(std::span<const RadarInput> arms,
                           StdMode mode = StdMode::kPopulation);

}  // namespace ragbench
