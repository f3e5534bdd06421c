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

#include "ragbench/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "ragbench/dense_index.hpp"
#include "ragbench/error.hpp"
#include "ragbench/late_index.hpp"
#include "ragbench/parallel.hpp"
#include "ragbench/qa_gen.hpp"

namespace fs = std::filesystem;

namespace ragbench {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd Stats(const std::vector<double>& xs) {
  MeanSd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(xs.size()));
  return out;
}

std::string SafeFileName(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out;
}

std::string UtcNow() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* IndexName(IndexKind k) { return k == IndexKind::kDense ? "dense" : "late"; }

// Only what the retrieval and answering stages may see.
struct QueryItem {
  std::string query_id;
  std::string question;
};

struct BuiltArm {
  const ArmSpec* spec = nullptr;
  std::optional<DenseIndex> dense;
  std::optional<LateIndex> late;
  std::vector<double> embed_seconds;
  std::size_t embed_calls = 0;

  std::size_t dim() const { return dense ? dense->dim() : late->dim(); }
};

class Providers {
 public:
  explicit Providers(const ExperimentConfig& config) {
    for (const auto& [name, spec] : config.embedders) {
      embedders_.emplace(name, MakeEmbedder(spec));
    }
  }
  EmbeddingProvider& embedder(const std::string& name) { return *embedders_.at(name); }
  std::vector<std::string> identities() const {
    std::vector<std::string> out;
    for (const auto& [name, p] : embedders_) out.push_back(name + ": " + p->identity());
    return out;
  }

 private:
  std::map<std::string, std::unique_ptr<EmbeddingProvider>> embedders_;
};

void CheckCorpusAgainstConfig(const Corpus& corpus, const ExperimentConfig& config,
                              bool need_questions) {
  for (const auto& arm : config.arms) {
    const std::vector<std::string> channels{arm.channel, arm.context_channel};
    corpus.require_channels(channels);
    if (arm.chunking) corpus.require_chunks();
  }
  if (corpus.documents().empty()) throw DataError("corpus has no documents");
  if (!need_questions) return;
  if (corpus.qa_pairs().empty()) throw DataError("corpus has no Q&A pairs");
  if (config.semantic_metrics) {
    for (std::size_t i = 0; i < corpus.qa_pairs().size(); ++i) {
      if (Normalize(corpus.qa_pairs()[i].reference_answer).empty()) {
        throw DataError("reference answer of " + QueryId(i) +
                        " has no tokens after normalization");
      }
    }
  }
}

Corpus LoadCorpusFor(const ExperimentConfig& config, bool need_questions = true) {
  Corpus corpus = LoadCorpus(config.corpus, config.qa_file);
  CheckCorpusAgainstConfig(corpus, config, need_questions);
  return corpus;
}

BuiltArm BuildArm(const ArmSpec& spec, const Corpus& corpus,
                  EmbeddingProvider& embedder, std::size_t workers) {
  const auto& docs = corpus.documents();
  BuiltArm built;
  built.spec = &spec;
  built.embed_seconds.assign(docs.size(), 0.0);
  const std::size_t calls_before = embedder.stats().calls;
  if (spec.index == IndexKind::kDense) {
    std::vector<DenseEntry> entries(docs.size());
    ParallelFor(docs.size(), workers, [&](std::size_t i) {
      const auto t0 = Clock::now();
      entries[i] = {docs[i].doc_id, EmbedText(embedder, docs[i].channels.at(spec.channel))};
      built.embed_seconds[i] = Seconds(t0, Clock::now());
    });
    built.dense = DenseIndex::Build(std::move(entries));
  } else {
    std::vector<LateEntry> entries(docs.size());
    ParallelFor(docs.size(), workers, [&](std::size_t i) {
      const auto t0 = Clock::now();
      MultiVectorEmbedding group =
          spec.chunking
              ? EmbedChunks(embedder, *docs[i].chunks)
              : MultiVectorEmbedding{{EmbedText(embedder, docs[i].channels.at(spec.channel))}};
      entries[i] = {docs[i].doc_id, std::move(group)};
      built.embed_seconds[i] = Seconds(t0, Clock::now());
    });
    built.late = LateIndex::Build(std::move(entries));
  }
  built.embed_calls = embedder.stats().calls - calls_before;
  return built;
}

struct Timing {
  double query_embed = 0.0;
  double retrieval = 0.0;
};

RankedResult Retrieve(const BuiltArm& arm, EmbeddingProvider& query_embedder,
                      const QueryItem& item, std::size_t k, Timing* timing) {
  const auto t0 = Clock::now();
  RankedResult ranked;
  Clock::time_point t1;
  if (arm.late && arm.spec->scoring == LateScoring::kSumMaxSim) {
    if (query_embedder.dim() != arm.dim()) {
      throw InvalidArgument("dimension mismatch: query provider produces " +
                            std::to_string(query_embedder.dim()) +
                            " but the index holds dim " + std::to_string(arm.dim()));
    }
    std::vector<std::string> tokens = Normalize(item.question);
    if (tokens.empty()) tokens.push_back(item.question);
    const auto q = EmbedChunks(query_embedder, tokens);
    t1 = Clock::now();
    ranked = arm.late->QueryMulti(q, k);
  } else {
    const auto q = EmbedQuery(query_embedder, item.question, arm.dim());
    t1 = Clock::now();
    ranked = arm.dense ? arm.dense->Query(q, k) : arm.late->Query(q, k);
  }
  const auto t2 = Clock::now();
  if (timing) *timing = {Seconds(t0, t1), Seconds(t1, t2)};
  ranked.query_id = item.query_id;
  return ranked;
}

Json RankedToJson(const RankedResult& r) {
  Json out = Json::array();
  for (const auto& e : r.entries) out.push_back(Json::array({e.doc_id, e.score}));
  return out;
}

RankedResult RankedFromJson(const Json& j, const std::string& qid) {
  RankedResult r;
  r.query_id = qid;
  for (const auto& e : j) r.entries.push_back({e.at(0).get<std::string>(), e.at(1).get<double>()});
  return r;
}

// Append-only record of finished (arm, query) units.
class Checkpoint {
 public:
  Checkpoint(const fs::path& path, const std::string& fingerprint, bool resume) {
    if (resume && fs::exists(path)) {
      std::ifstream in(path);
      std::string line;
      bool header = true;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json rec;
        try {
          rec = Json::parse(line);
        } catch (const Json::parse_error&) {
          break;  // torn final line from an interrupted write
        }
        if (header) {
          if (rec.value("fingerprint", std::string()) != fingerprint) {
            throw ConfigError("checkpoint " + path.string() +
                              " was written by a different configuration");
          }
          header = false;
          continue;
        }
        done_[{rec.at("arm").get<std::string>(), rec.at("qid").get<std::string>()}] = rec;
      }
      if (header) {
        WriteHeader(path, fingerprint);
      } else {
        out_.open(path, std::ios::app);
      }
    } else {
      WriteHeader(path, fingerprint);
    }
    if (!out_) throw IoError("cannot write checkpoint " + path.string());
  }

  const Json* find(const std::string& arm, const std::string& qid) const {
    auto it = done_.find({arm, qid});
    return it == done_.end() ? nullptr : &it->second;
  }
  std::size_t restored() const { return done_.size(); }

  void append(const Json& rec) {
    std::lock_guard lock(mu_);
    out_ << rec.dump() << '\n';
    out_.flush();
  }

 private:
  void WriteHeader(const fs::path& path, const std::string& fingerprint) {
    out_.open(path, std::ios::trunc);
    out_ << Json{{"checkpoint", 1}, {"fingerprint", fingerprint}}.dump() << '\n';
    out_.flush();
  }

  std::map<std::pair<std::string, std::string>, Json> done_;
  std::ofstream out_;
  std::mutex mu_;
};

struct QueryOutcome {
  RankedResult ranked;
  std::optional<GeneratedAnswer> answer;
  std::optional<Timing> timing;
};

Json SectionToJson(const LevelSection& s, std::size_t k) {
  Json j;
  if (s.level >= 0) j["level"] = s.level;
  j["questions"] = s.questions;
  if (s.retrieval) {
    j["retrieval"] = Json{{"mrr", s.retrieval->mrr},
                          {"recall@" + std::to_string(k), s.retrieval->recall},
                          {"ndcg@" + std::to_string(k), s.retrieval->ndcg}};
  } else {
    j["retrieval"] = nullptr;
  }
  if (s.semantic) {
    j["semantic"] = Json{{"exact_match", s.semantic->exact_match},
                         {"bleu", s.semantic->bleu},
                         {"rouge1", s.semantic->rouge1},
                         {"rougeL", s.semantic->rouge_l}};
  } else {
    j["semantic"] = nullptr;
  }
  j["no_context"] = s.no_context;
  j["truncated_contexts"] = s.truncated_contexts;
  j["undefined_rouge_l"] = s.undefined_rouge_l;
  return j;
}

Json Opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json AxisToJson(const std::optional<AxisScore>& a) {
  if (!a) return nullptr;
  return Json{{"raw", a->raw}, {"score", a->score}};
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::size_t SaveSnapshot(const BuiltArm& arm, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string base = SafeFileName(arm.spec->name);
  return arm.dense ? arm.dense->Save(dir / (base + ".drix"))
                   : arm.late->Save(dir / (base + ".lrix"));
}

EfficiencyStats StaticEfficiency(const BuiltArm& arm, const Corpus& corpus,
                                 std::size_t snapshot_bytes) {
  EfficiencyStats e;
  e.documents = arm.dense ? arm.dense->size() : arm.late->size();
  e.vectors = arm.dense ? arm.dense->size() : arm.late->vector_count();
  e.payload_bytes = arm.dense ? arm.dense->payload_bytes() : arm.late->payload_bytes();
  e.index_bytes = arm.dense ? arm.dense->memory_bytes() : arm.late->memory_bytes();
  e.snapshot_bytes = snapshot_bytes;
  e.memory_per_1k_docs =
      static_cast<double>(e.index_bytes) * 1000.0 / static_cast<double>(e.documents);
  e.embedding_calls = arm.embed_calls;
  auto it = corpus.ocr_seconds_per_doc().find(arm.spec->channel);
  if (it != corpus.ocr_seconds_per_doc().end()) e.ocr_time_per_doc = it->second;
  return e;
}

void AddTimings(EfficiencyStats& e, const BuiltArm& arm,
                const std::vector<Timing>& timings) {
  const auto embed = Stats(arm.embed_seconds);
  e.embedding_time_per_doc = embed.mean;
  e.embedding_time_stddev = embed.sd;
  std::vector<double> ret, qemb, total;
  for (const auto& t : timings) {
    ret.push_back(t.retrieval);
    qemb.push_back(t.query_embed);
    total.push_back(t.retrieval + t.query_embed);
  }
  if (timings.empty()) return;
  const auto r = Stats(ret);
  e.retrieval_latency_per_query = r.mean;
  e.retrieval_latency_stddev = r.sd;
  e.query_embedding_time_per_query = Stats(qemb).mean;
  e.end_to_end_latency_per_query = Stats(total).mean;
}

std::string Fmt(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::vector<std::vector<std::string>> TableRows(const Json& report, bool radar) {
  std::vector<std::vector<std::string>> rows;
  const Json& arms = report.at("arms");
  if (radar) {
    static const char* kAxes[] = {"clean_retrieval", "noisy_retrieval",
                                  "semantic_quality", "processing_speed",
                                  "memory_efficiency"};
    std::vector<std::string> header{"arm"};
    for (const char* a : kAxes) header.push_back(a);
    rows.push_back(header);
    for (const auto& r : report.at("radar").at("arms")) {
      std::vector<std::string> row{r.at("arm").get<std::string>()};
      for (const char* a : kAxes) {
        const Json& v = r.at(a);
        row.push_back(v.is_null() ? "" : Fmt(v.at("score").get<double>(), 4));
      }
      rows.push_back(row);
    }
    return rows;
  }
  std::vector<std::string> header{"level", "questions", "metric"};
  for (const auto& a : arms) header.push_back(a.at("name").get<std::string>());
  rows.push_back(header);

  // Metric names in first-seen order across arms.
  std::vector<std::pair<std::string, std::string>> metrics;
  for (const auto& a : arms) {
    for (const char* group : {"retrieval", "semantic"}) {
      const Json& g = a.at("total").at(group);
      if (g.is_null()) continue;
      for (const auto& [name, _] : g.items()) {
        std::pair<std::string, std::string> m{group, name};
        if (std::find(metrics.begin(), metrics.end(), m) == metrics.end())
          metrics.push_back(m);
      }
    }
  }
  auto emit = [&](const std::string& label, auto section_of) {
    const Json& first = section_of(arms.at(0));
    for (const auto& [group, name] : metrics) {
      std::vector<std::string> row{label, std::to_string(first.at("questions").template get<std::size_t>()),
                                   name};
      for (const auto& a : arms) {
        const Json& g = section_of(a).at(group);
        row.push_back(g.is_null() || !g.contains(name) || g.at(name).is_null()
                          ? ""
                          : Fmt(g.at(name).template get<double>(), 6));
      }
      rows.push_back(row);
    }
  };
  const std::size_t n_levels = report.at("levels").size();
  for (std::size_t li = 0; li < n_levels; ++li) {
    const std::string label = "Level " + std::to_string(report.at("levels").at(li).get<int>());
    emit(label, [li](const Json& a) -> const Json& { return a.at("levels").at(li); });
  }
  emit("Total", [](const Json& a) -> const Json& { return a.at("total"); });
  return rows;
}

std::string ToCsv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      const std::string& cell = row[i];
      if (cell.find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char c : cell) out += c == '"' ? std::string("\"\"") : std::string(1, c);
        out += '"';
      } else {
        out += cell;
      }
    }
    out += '\n';
  }
  return out;
}

std::string ToText(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i > 0) out += "  ";
      out += rows[r][i];
      if (i + 1 < rows[r].size()) out.append(width[i] - rows[r][i].size(), ' ');
    }
    out += '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i ? 2 : 0);
      out += std::string(total, '-') + '\n';
    }
  }
  return out;
}

}  // namespace

double WeightedTotal(std::span<const std::pair<std::size_t, double>> per_level) {
  double num = 0.0;
  std::size_t den = 0;
  for (const auto& [count, value] : per_level) {
    num += static_cast<double>(count) * value;
    den += count;
  }
  if (den == 0) throw InvalidArgument("weighted total over zero questions");
  return num / static_cast<double>(den);
}

void AggregateArm(ArmReport& arm, std::span<const RetrievalJudgment> judgments,
                  std::span<const int> levels, std::span<const int> levels_present,
                  std::size_t k, const std::vector<AnswerPair>* answers,
                  const std::vector<std::size_t>* no_context,
                  const std::vector<std::size_t>* truncated,
                  const SemanticOptions& opts) {
  auto section = [&](int level, const std::vector<std::size_t>& idx) {
    LevelSection s;
    s.level = level;
    s.questions = idx.size();
    if (idx.empty()) return s;
    std::vector<RetrievalJudgment> js;
    for (std::size_t i : idx) js.push_back(judgments[i]);
    s.retrieval = RetrievalScores{Mrr(js), RecallAtK(js, k), NdcgAtK(js, k)};
    if (answers) {
      std::vector<AnswerPair> ps;
      for (std::size_t i : idx) {
        ps.push_back((*answers)[i]);
        if (no_context) s.no_context += (*no_context)[i];
        if (truncated) s.truncated_contexts += (*truncated)[i];
      }
      const auto summary = SemanticReport(ps, opts);
      s.semantic = summary.mean;
      s.undefined_rouge_l = summary.undefined_rouge_l;
    }
    return s;
  };
  arm.levels.clear();
  for (int level : levels_present) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < judgments.size(); ++i) {
      if (levels[i] == level) idx.push_back(i);
    }
    arm.levels.push_back(section(level, idx));
  }
  std::vector<std::size_t> all(judgments.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  arm.total = section(-1, all);
}

Json EfficiencyToJson(const EfficiencyStats& e) {
  return Json{
      {"embedding_time_per_doc_s", Opt(e.embedding_time_per_doc)},
      {"embedding_time_stddev_s", Opt(e.embedding_time_stddev)},
      {"retrieval_latency_per_query_s", Opt(e.retrieval_latency_per_query)},
      {"retrieval_latency_stddev_s", Opt(e.retrieval_latency_stddev)},
      {"query_embedding_time_per_query_s", Opt(e.query_embedding_time_per_query)},
      {"end_to_end_latency_per_query_s", Opt(e.end_to_end_latency_per_query)},
      {"ocr_time_per_doc_s", Opt(e.ocr_time_per_doc)},
      {"documents", e.documents},
      {"vectors", e.vectors},
      {"payload_bytes", e.payload_bytes},
      {"index_bytes", e.index_bytes},
      {"snapshot_bytes", e.snapshot_bytes},
      {"memory_per_1k_docs_bytes", e.memory_per_1k_docs},
      {"embedding_calls", e.embedding_calls},
  };
}

Json RadarToJson(const RadarResult& radar, const std::string& std_mode) {
  Json j;
  j["std"] = std_mode;
  j["warnings"] = radar.warnings;
  j["arms"] = Json::array();
  for (const auto& r : radar.arms) {
    j["arms"].push_back(Json{{"arm", r.arm},
                             {"clean_retrieval", AxisToJson(r.clean_retrieval)},
                             {"noisy_retrieval", AxisToJson(r.noisy_retrieval)},
                             {"semantic_quality", AxisToJson(r.semantic_quality)},
                             {"processing_speed", AxisToJson(r.processing_speed)},
                             {"memory_efficiency", AxisToJson(r.memory_efficiency)}});
  }
  return j;
}

Json ReportToJson(const EvalReport& report) {
  Json j;
  j["format"] = "ragbench-report/1";
  j["tokenizer"] = kTokenizerVersion;
  j["k"] = report.k;
  j["levels"] = report.levels;
  j["questions_per_level"] = Json::array();
  for (int level : report.levels) {
    j["questions_per_level"].push_back(
        Json{{"level", level}, {"questions", report.questions_per_level[level]}});
  }
  j["arms"] = Json::array();
  for (const auto& arm : report.arms) {
    Json a;
    a["name"] = arm.name;
    a["index"] = IndexName(arm.index);
    a["levels"] = Json::array();
    for (const auto& s : arm.levels) a["levels"].push_back(SectionToJson(s, report.k));
    a["total"] = SectionToJson(arm.total, report.k);
    a["efficiency"] = EfficiencyToJson(arm.efficiency);
    j["arms"].push_back(a);
  }
  j["radar"] = RadarToJson(report.radar, report.config.at("radar").at("std").get<std::string>());
  j["providers"] = report.providers;
  j["config"] = report.config;
  return j;
}

EvalReport RunExperiment(const ExperimentConfig& config) {
  const std::string started = UtcNow();
  const auto wall0 = Clock::now();
  const Corpus corpus = LoadCorpusFor(config);
  const std::size_t workers = config.profiling ? 1 : config.workers;

  Providers providers(config);
  std::unique_ptr<GenerationProvider> generator;
  if (config.semantic_metrics) generator = MakeGenerator(config.generation);

  fs::create_directories(config.output_dir);
  Checkpoint checkpoint(config.output_dir / "checkpoint.jsonl", config.fingerprint(),
                        config.resume);

  std::vector<QueryItem> items;
  std::vector<int> item_levels;
  for (std::size_t i = 0; i < corpus.qa_pairs().size(); ++i) {
    items.push_back({QueryId(i), corpus.qa_pairs()[i].question});
    item_levels.push_back(corpus.at(corpus.qa_pairs()[i].doc_id).level);
  }

  EvalReport report;
  report.config = config.tree;
  report.k = config.k;
  report.questions_per_level = corpus.questions_per_level();
  {
    std::array<bool, kNumDegradationLevels> seen{};
    for (const auto& d : corpus.documents()) seen[d.level] = true;
    for (int l = 0; l < kNumDegradationLevels; ++l) {
      if (seen[l]) report.levels.push_back(l);
    }
  }
  report.providers = providers.identities();
  if (generator) report.providers.push_back("generation: " + generator->identity());

  AnswerOptions answer_opts;
  answer_opts.context_token_budget = config.context_token_budget;
  answer_opts.prompts = config.prompts;

  std::vector<RadarInput> radar_inputs;
  for (const auto& spec : config.arms) {
    const BuiltArm built =
        BuildArm(spec, corpus, providers.embedder(spec.doc_embedder), workers);
    EmbeddingProvider& query_embedder = providers.embedder(spec.query_embedder);

    std::vector<QueryOutcome> outcomes(items.size());
    ParallelFor(items.size(), workers, [&](std::size_t i) {
      const QueryItem& item = items[i];
      QueryOutcome& out = outcomes[i];
      if (const Json* rec = checkpoint.find(spec.name, item.query_id)) {
        out.ranked = RankedFromJson(rec->at("ranked"), item.query_id);
        if (generator) {
          GeneratedAnswer a;
          a.text = rec->at("answer").get<std::string>();
          a.no_context = rec->at("no_context").get<bool>();
          a.truncated_contexts = rec->at("truncated_contexts").get<std::size_t>();
          a.dropped_tokens = rec->at("dropped_tokens").get<std::size_t>();
          out.answer = a;
        }
        return;
      }
      Timing timing;
      out.ranked = Retrieve(built, query_embedder, item, config.k, &timing);
      if (config.profiling) out.timing = timing;
      Json rec{{"arm", spec.name}, {"qid", item.query_id},
               {"ranked", RankedToJson(out.ranked)}};
      if (generator) {
        std::vector<std::string> context;
        for (const auto& e : out.ranked.entries)
          context.push_back(corpus.at(e.doc_id).channels.at(spec.context_channel));
        out.answer = GenerateAnswer(*generator, item.question, context, answer_opts);
        rec["answer"] = out.answer->text;
        rec["no_context"] = out.answer->no_context;
        rec["truncated_contexts"] = out.answer->truncated_contexts;
        rec["dropped_tokens"] = out.answer->dropped_tokens;
      }
      checkpoint.append(rec);
    });

    // Scoring joins gold labels and references back in.
    std::vector<RetrievalJudgment> judgments;
    std::vector<AnswerPair> answers;
    std::vector<std::size_t> no_context, truncated;
    std::vector<Timing> timings;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const QAPair& qa = corpus.qa_pairs()[i];
      judgments.push_back({items[i].query_id, qa.doc_id, outcomes[i].ranked});
      if (outcomes[i].answer) {
        answers.push_back({items[i].query_id, outcomes[i].answer->text, qa.reference_answer});
        no_context.push_back(outcomes[i].answer->no_context ? 1 : 0);
        truncated.push_back(outcomes[i].answer->truncated_contexts);
      }
      if (outcomes[i].timing) timings.push_back(*outcomes[i].timing);
    }

    ArmReport arm;
    arm.name = spec.name;
    arm.index = spec.index;
    AggregateArm(arm, judgments, item_levels, report.levels, config.k,
                 generator ? &answers : nullptr, &no_context, &truncated,
                 config.semantic_options);
    if (!config.retrieval_metrics) {
      for (auto& s : arm.levels) s.retrieval.reset();
      arm.total.retrieval.reset();
    }
    const std::size_t snapshot_bytes = SaveSnapshot(built, config.output_dir / "indexes");
    arm.efficiency = StaticEfficiency(built, corpus, snapshot_bytes);
    if (config.profiling) AddTimings(arm.efficiency, built, timings);

    RadarInput in;
    in.arm = spec.name;
    for (const auto& s : arm.levels) {
      if (!s.retrieval) continue;
      if (s.level == 0) in.mrr_clean = s.retrieval->mrr;
      if (s.level == 3) in.mrr_noisy = s.retrieval->mrr;
    }
    if (arm.total.semantic) in.rouge_l_total = arm.total.semantic->rouge_l;
    in.latency_seconds = arm.efficiency.retrieval_latency_per_query;
    in.memory_per_1k_docs = arm.efficiency.memory_per_1k_docs;
    radar_inputs.push_back(in);
    report.arms.push_back(std::move(arm));
  }
  report.radar = RadarScoresFor(radar_inputs, config.radar_std);

  const Json j = ReportToJson(report);
  WriteText(config.output_dir / "report.json", j.dump(2) + "\n");
  WriteText(config.output_dir / "tables.csv", RenderReport(j, ReportFormat::kCsv, false));
  WriteText(config.output_dir / "radar.csv", RenderReport(j, ReportFormat::kCsv, true));
  Json meta{{"started_at", started},
            {"finished_at", UtcNow()},
            {"wall_seconds", Seconds(wall0, Clock::now())},
            {"fingerprint", config.fingerprint()},
            {"restored_from_checkpoint", checkpoint.restored()},
            {"profiling", config.profiling},
            {"workers", workers}};
  WriteText(config.output_dir / "run_meta.json", meta.dump(2) + "\n");
  return report;
}

EfficiencyStats ProfileEfficiency(const ExperimentConfig& config,
                                  const std::string& arm_name) {
  const ArmSpec& spec = config.arm(arm_name);
  const Corpus corpus = LoadCorpusFor(config);
  Providers providers(config);
  const BuiltArm built = BuildArm(spec, corpus, providers.embedder(spec.doc_embedder), 1);
  EmbeddingProvider& query_embedder = providers.embedder(spec.query_embedder);
  std::vector<Timing> timings;
  for (std::size_t i = 0; i < corpus.qa_pairs().size(); ++i) {
    Timing t;
    Retrieve(built, query_embedder, {QueryId(i), corpus.qa_pairs()[i].question},
             config.k, &t);
    timings.push_back(t);
  }
  const std::size_t snapshot_bytes = SaveSnapshot(built, config.output_dir / "indexes");
  EfficiencyStats e = StaticEfficiency(built, corpus, snapshot_bytes);
  AddTimings(e, built, timings);
  return e;
}

std::vector<QAPair> GenerateQaForCorpus(const ExperimentConfig& config) {
  const Corpus corpus = LoadCorpus(config.corpus);
  if (config.qa_channel.empty()) throw ConfigError("qa_generation.channel is not set");
  const std::vector<std::string> channel{config.qa_channel};
  corpus.require_channels(channel);
  auto generator = MakeGenerator(config.generation);
  QaGenOptions opts;
  opts.pairs = config.qa_pairs;
  opts.max_reasks = config.qa_max_reasks;
  opts.prompts = config.prompts;
  // Sequential so scripted replies are consumed in document order.
  std::vector<QAPair> pairs;
  for (const auto& doc : corpus.documents()) {
    auto got = GenerateQaPairs(*generator, doc, config.qa_channel, opts);
    pairs.insert(pairs.end(), got.begin(), got.end());
  }
  fs::create_directories(config.output_dir);
  std::string text;
  for (const auto& qa : pairs) {
    text += Json{{"kind", "qa"}, {"doc_id", qa.doc_id}, {"question", qa.question},
                 {"answer", qa.reference_answer}}
                .dump() +
            "\n";
  }
  WriteText(config.output_dir / "qa.jsonl", text);
  return pairs;
}

Json EmbedCorpus(const ExperimentConfig& config) {
  const Corpus corpus = LoadCorpusFor(config, false);
  Providers providers(config);
  const fs::path dir = config.output_dir / "embeddings";
  fs::create_directories(dir);
  Json summary = Json::array();
  for (const auto& spec : config.arms) {
    const BuiltArm built =
        BuildArm(spec, corpus, providers.embedder(spec.doc_embedder), config.workers);
    std::string text;
    std::size_t vectors = 0;
    const std::size_t n = built.dense ? built.dense->size() : built.late->size();
    for (std::size_t i = 0; i < n; ++i) {
      Json rec;
      Json vs = Json::array();
      if (built.dense) {
        rec["doc_id"] = built.dense->doc_ids()[i];
        vs.push_back(built.dense->vector(i));
      } else {
        rec["doc_id"] = built.late->doc_ids()[i];
        for (std::size_t g = 0; g < built.late->group_size(i); ++g)
          vs.push_back(built.late->vector(i, g));
      }
      vectors += vs.size();
      rec["vectors"] = std::move(vs);
      text += rec.dump() + "\n";
    }
    const fs::path file = dir / (SafeFileName(spec.name) + ".jsonl");
    WriteText(file, text);
    summary.push_back(Json{{"arm", spec.name},
                           {"documents", n},
                           {"vectors", vectors},
                           {"dim", built.dim()},
                           {"embedding_calls", built.embed_calls},
                           {"file", file.string()}});
  }
  return summary;
}

Json BuildIndexes(const ExperimentConfig& config) {
  const Corpus corpus = LoadCorpusFor(config, false);
  Providers providers(config);
  Json summary = Json::array();
  for (const auto& spec : config.arms) {
    const BuiltArm built =
        BuildArm(spec, corpus, providers.embedder(spec.doc_embedder), config.workers);
    const std::size_t bytes = SaveSnapshot(built, config.output_dir / "indexes");
    Json j = EfficiencyToJson(StaticEfficiency(built, corpus, bytes));
    j["arm"] = spec.name;
    j["index"] = IndexName(spec.index);
    summary.push_back(j);
  }
  return summary;
}

std::string RenderReport(const Json& report, ReportFormat format, bool radar) {
  try {
    if (format == ReportFormat::kJson) {
      if (radar) return report.at("radar").dump(2) + "\n";
      return report.dump(2) + "\n";
    }
    if (!report.at("arms").is_array() || report.at("arms").empty())
      throw DataError("report has no arms");
    const auto rows = TableRows(report, radar);
    return format == ReportFormat::kCsv ? ToCsv(rows) : ToText(rows);
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace ragbench
