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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ragbench/config.hpp"
#include "ragbench/corpus.hpp"
#include "ragbench/json_fwd.hpp"
#include "ragbench/radar.hpp"
#include "ragbench/retrieval_metrics.hpp"
#include "ragbench/semantic_metrics.hpp"

namespace ragbench {

struct EfficiencyStats {
  // Measured only when profiling is on; wall-clock seconds.
  std::optional<double> embedding_time_per_doc;
  std::optional<double> embedding_time_stddev;
  std::optional<double> retrieval_latency_per_query;
  std::optional<double> retrieval_latency_stddev;
  std::optional<double> query_embedding_time_per_query;
  std::optional<double> end_to_end_latency_per_query;
  // Ingested from corpus metadata, never measured here.
  std::optional<double> ocr_time_per_doc;

  std::size_t documents = 0;
  std::size_t vectors = 0;
  std::size_t payload_bytes = 0;
  std::size_t index_bytes = 0;
  std::size_t snapshot_bytes = 0;
  // index_bytes * 1000 / documents
  double memory_per_1k_docs = 0.0;
  std::size_t embedding_calls = 0;
};

struct RetrievalScores {
  double mrr = 0.0;
  double recall = 0.0;
  double ndcg = 0.0;
};

struct LevelSection {
  int level = -1;  // -1 for the total
  std::size_t questions = 0;
  std::optional<RetrievalScores> retrieval;
  std::optional<SemanticScores> semantic;
  std::size_t no_context = 0;
  std::size_t truncated_contexts = 0;
  std::size_t undefined_rouge_l = 0;
};

struct ArmReport {
  std::string name;
  IndexKind index = IndexKind::kDense;
  std::vector<LevelSection> levels;
  LevelSection total;
  EfficiencyStats efficiency;
};

struct EvalReport {
  Json config;
  std::size_t k = 5;
  std::vector<int> levels;  // levels holding at least one document
  std::array<std::size_t, kNumDegradationLevels> questions_per_level{};
  std::vector<ArmReport> arms;
  RadarResult radar;
  std::vector<std::string> providers;
};

// Question-count-weighted mean of per-level values; what a total must equal.
double WeightedTotal(std::span<const std::pair<std::size_t, double>> per_level);

// Per-level and total aggregation for one arm. `levels` holds each
// judgment's degradation level. Semantic pairs are parallel to judgments
// when present.
void AggregateArm(ArmReport& arm, std::span<const RetrievalJudgment> judgments,
                  std::span<const int> levels, std::span<const int> levels_present,
                  std::size_t k, const std::vector<AnswerPair>* answers,
                  const std::vector<std::size_t>* no_context,
                  const std::vector<std::size_t>* truncated,
                  const SemanticOptions& opts);

// Embed -> index -> retrieve -> answer -> score for every arm, segmented by
// degradation level. Writes report.json, tables.csv, radar.csv,
// run_meta.json and index snapshots under config.output_dir.
// Progress is checkpointed so a run cut short by a provider failure can be
// resumed with `resume`.
EvalReport RunExperiment(const ExperimentConfig& config);

// Sequential (batch size 1) timing of one arm: document embedding, query
// embedding and scoring+ranking measured separately.
EfficiencyStats ProfileEfficiency(const ExperimentConfig& config,
                                  const std::string& arm);

// Q&A pairs for every document from config.qa_channel, in document order.
// Also written to output_dir/qa.jsonl as corpus "qa" records.
std::vector<QAPair> GenerateQaForCorpus(const ExperimentConfig& config);

// Embeds each arm's documents into output_dir/embeddings/<arm>.jsonl and
// returns a per-arm summary.
Json EmbedCorpus(const ExperimentConfig& config);

// Builds and snapshots each arm's index under output_dir/indexes.
Json BuildIndexes(const ExperimentConfig& config);

Json RadarToJson(const RadarResult& radar, const std::string& std_mode);

Json ReportToJson(const EvalReport& report);

enum class ReportFormat { kJson, kCsv, kText };

// Renders a report.json document: level/metric tables with a Total row, or
// the radar table when `radar` is set.
std::string RenderReport(const Json& report, ReportFormat format, bool radar);

Json EfficiencyToJson(const EfficiencyStats& stats);

}  // namespace ragbench
