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

#include "ragbench/ragbench.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "ragbench/config.hpp"
#include "ragbench/corpus.hpp"
#include "ragbench/dense_index.hpp"
#include "ragbench/embed.hpp"
#include "ragbench/error.hpp"
#include "ragbench/harness.hpp"
#include "ragbench/late_index.hpp"
#include "ragbench/radar.hpp"
#include "ragbench/retrieval_metrics.hpp"
#include "ragbench/semantic_metrics.hpp"

using namespace ragbench;

struct rb_config {
  Json tree;
  std::filesystem::path base_dir;
  ExperimentConfig parsed;
};

struct rb_dense_index {
  DenseIndex index;
};

struct rb_late_index {
  LateIndex index;
};

struct rb_ranked {
  RankedResult result;
};

namespace {

thread_local std::string g_last_error;

rb_status Fail(rb_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
rb_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RB_OK;
  } catch (const Error& e) {
    return Fail(static_cast<rb_status>(e.kind()), e.what());
  } catch (const Json::exception& e) {
    return Fail(RB_ERR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(RB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(RB_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(RB_ERR_INTERNAL, "unknown error");
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void Require(bool cond, const char* what) {
  if (!cond) throw InvalidArgument(what);
}

DenseEmbedding Row(const float* p, std::size_t dim) {
  return DenseEmbedding{std::vector<float>(p, p + dim)};
}

}  // namespace

extern "C" {

const char* rb_version(void) { return "0.1.0"; }

const char* rb_last_error(void) { return g_last_error.c_str(); }

void rb_string_free(char* s) { std::free(s); }

rb_status rb_validate_corpus(const char* path, const char* const* channels,
                             size_t n_channels, char** report_json, size_t* violations) {
  return Guard([&] {
    Require(path && report_json, "path and report_json are required");
    Require(n_channels == 0 || channels, "channels is null");
    std::vector<std::string> ch(channels, channels + n_channels);
    const ValidationReport r = ValidateCorpusFile(path, ch);
    Json findings = Json::array();
    for (const auto& f : r.findings) {
      Json j{{"code", f.code}, {"line", f.line}, {"message", f.message}};
      if (!f.doc_id.empty()) j["doc_id"] = f.doc_id;
      if (!f.query_id.empty()) j["query_id"] = f.query_id;
      findings.push_back(j);
    }
    Json out{{"path", path},
             {"documents", r.documents},
             {"qa_pairs", r.qa_pairs},
             {"violations", r.findings.size()},
             {"findings", findings},
             {"summary", std::to_string(r.findings.size()) + " violations"}};
    if (violations) *violations = r.findings.size();
    *report_json = Dup(out.dump(2));
    if (r.io_failure) {
      throw IoError(r.findings.empty() ? "cannot read corpus" : r.findings[0].message);
    }
  });
}

rb_status rb_config_load(const char* path, rb_config** out) {
  return Guard([&] {
    Require(path && out, "path and out are required");
    auto c = std::make_unique<rb_config>();
    c->tree = LoadConfigTree(path);
    c->base_dir = std::filesystem::path(path).parent_path();
    c->parsed = ParseConfig(c->tree, c->base_dir);
    *out = c.release();
  });
}

rb_status rb_config_set(rb_config* config, const char* assignment) {
  return Guard([&] {
    Require(config && assignment, "config and assignment are required");
    Json tree = config->tree;
    ApplyOverride(tree, assignment);
    ExperimentConfig parsed = ParseConfig(tree, config->base_dir);
    config->tree = std::move(tree);
    config->parsed = std::move(parsed);
  });
}

rb_status rb_config_to_json(const rb_config* config, char** out) {
  return Guard([&] {
    Require(config && out, "config and out are required");
    *out = Dup(config->parsed.tree.dump(2));
  });
}

void rb_config_free(rb_config* config) { delete config; }

rb_status rb_run_experiment(const rb_config* config, char** report_json) {
  return Guard([&] {
    Require(config, "config is required");
    const EvalReport report = RunExperiment(config->parsed);
    if (report_json) *report_json = Dup(ReportToJson(report).dump(2));
  });
}

rb_status rb_profile(const rb_config* config, const char* arm, char** stats_json) {
  return Guard([&] {
    Require(config && arm && stats_json, "config, arm and stats_json are required");
    Json j = EfficiencyToJson(ProfileEfficiency(config->parsed, arm));
    j["arm"] = arm;
    *stats_json = Dup(j.dump(2));
  });
}

rb_status rb_generate_qa(const rb_config* config, char** pairs_json) {
  return Guard([&] {
    Require(config, "config is required");
    const auto pairs = GenerateQaForCorpus(config->parsed);
    if (!pairs_json) return;
    Json j = Json::array();
    for (const auto& p : pairs) {
      j.push_back(Json{{"doc_id", p.doc_id}, {"question", p.question},
                       {"answer", p.reference_answer}});
    }
    *pairs_json = Dup(j.dump(2));
  });
}

rb_status rb_embed(const rb_config* config, char** summary_json) {
  return Guard([&] {
    Require(config, "config is required");
    const Json j = EmbedCorpus(config->parsed);
    if (summary_json) *summary_json = Dup(j.dump(2));
  });
}

rb_status rb_build_indexes(const rb_config* config, char** summary_json) {
  return Guard([&] {
    Require(config, "config is required");
    const Json j = BuildIndexes(config->parsed);
    if (summary_json) *summary_json = Dup(j.dump(2));
  });
}

rb_status rb_report_render(const char* report_json, rb_format format, int radar,
                           char** out) {
  return Guard([&] {
    Require(report_json && out, "report_json and out are required");
    Json report;
    try {
      report = Json::parse(report_json);
    } catch (const Json::parse_error& e) {
      throw DataError(std::string("report is not valid JSON: ") + e.what());
    }
    ReportFormat f = ReportFormat::kJson;
    if (format == RB_FORMAT_CSV) f = ReportFormat::kCsv;
    else if (format == RB_FORMAT_TEXT) f = ReportFormat::kText;
    else Require(format == RB_FORMAT_JSON, "unknown format");
    *out = Dup(RenderReport(report, f, radar != 0));
  });
}

rb_status rb_dense_index_build(const char* const* ids, const float* vectors, size_t n,
                               size_t dim, rb_dense_index** out) {
  return Guard([&] {
    Require(out && (n == 0 || (ids && vectors)), "ids, vectors and out are required");
    std::vector<DenseEntry> entries;
    entries.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      Require(ids[i] != nullptr, "null document id");
      entries.emplace_back(ids[i], Row(vectors + i * dim, dim));
    }
    *out = new rb_dense_index{DenseIndex::Build(std::move(entries))};
  });
}

rb_status rb_dense_index_load(const char* path, rb_dense_index** out) {
  return Guard([&] {
    Require(path && out, "path and out are required");
    *out = new rb_dense_index{DenseIndex::Load(path)};
  });
}

rb_status rb_dense_index_save(const rb_dense_index* index, const char* path,
                              size_t* bytes_written) {
  return Guard([&] {
    Require(index && path, "index and path are required");
    const size_t n = index->index.Save(path);
    if (bytes_written) *bytes_written = n;
  });
}

rb_status rb_dense_index_query(const rb_dense_index* index, const float* q, size_t dim,
                               size_t k, rb_ranked** out) {
  return Guard([&] {
    Require(index && q && out, "index, q and out are required");
    *out = new rb_ranked{index->index.Query(Row(q, dim), k)};
  });
}

size_t rb_dense_index_size(const rb_dense_index* index) {
  return index ? index->index.size() : 0;
}
size_t rb_dense_index_dim(const rb_dense_index* index) {
  return index ? index->index.dim() : 0;
}
size_t rb_dense_index_memory_bytes(const rb_dense_index* index) {
  return index ? index->index.memory_bytes() : 0;
}
void rb_dense_index_free(rb_dense_index* index) { delete index; }

rb_status rb_late_index_build(const char* const* ids, const size_t* group_sizes,
                              const float* vectors, size_t n_docs, size_t dim,
                              rb_late_index** out) {
  return Guard([&] {
    Require(out && (n_docs == 0 || (ids && group_sizes && vectors)),
            "ids, group_sizes, vectors and out are required");
    std::vector<LateEntry> entries;
    entries.reserve(n_docs);
    const float* p = vectors;
    for (size_t d = 0; d < n_docs; ++d) {
      Require(ids[d] != nullptr, "null document id");
      MultiVectorEmbedding group;
      for (size_t j = 0; j < group_sizes[d]; ++j, p += dim) group.vectors.push_back(Row(p, dim));
      entries.emplace_back(ids[d], std::move(group));
    }
    *out = new rb_late_index{LateIndex::Build(std::move(entries))};
  });
}

rb_status rb_late_index_load(const char* path, rb_late_index** out) {
  return Guard([&] {
    Require(path && out, "path and out are required");
    *out = new rb_late_index{LateIndex::Load(path)};
  });
}

rb_status rb_late_index_save(const rb_late_index* index, const char* path,
                             size_t* bytes_written) {
  return Guard([&] {
    Require(index && path, "index and path are required");
    const size_t n = index->index.Save(path);
    if (bytes_written) *bytes_written = n;
  });
}

rb_status rb_late_index_query(const rb_late_index* index, const float* q, size_t dim,
                              size_t k, size_t threads, rb_ranked** out) {
  return Guard([&] {
    Require(index && q && out, "index, q and out are required");
    *out = new rb_ranked{index->index.Query(Row(q, dim), k, threads)};
  });
}

rb_status rb_late_index_query_multi(const rb_late_index* index, const float* q,
                                    size_t n_q, size_t dim, size_t k, size_t threads,
                                    rb_ranked** out) {
  return Guard([&] {
    Require(index && q && out, "index, q and out are required");
    MultiVectorEmbedding m;
    for (size_t i = 0; i < n_q; ++i) m.vectors.push_back(Row(q + i * dim, dim));
    *out = new rb_ranked{index->index.QueryMulti(m, k, threads)};
  });
}

size_t rb_late_index_size(const rb_late_index* index) {
  return index ? index->index.size() : 0;
}
size_t rb_late_index_vector_count(const rb_late_index* index) {
  return index ? index->index.vector_count() : 0;
}
size_t rb_late_index_memory_bytes(const rb_late_index* index) {
  return index ? index->index.memory_bytes() : 0;
}
void rb_late_index_free(rb_late_index* index) { delete index; }

size_t rb_ranked_count(const rb_ranked* r) { return r ? r->result.entries.size() : 0; }

const char* rb_ranked_doc_id(const rb_ranked* r, size_t i) {
  if (!r || i >= r->result.entries.size()) return nullptr;
  return r->result.entries[i].doc_id.c_str();
}

double rb_ranked_score(const rb_ranked* r, size_t i) {
  if (!r || i >= r->result.entries.size()) return 0.0;
  return r->result.entries[i].score;
}

void rb_ranked_free(rb_ranked* r) { delete r; }

rb_status rb_retrieval_metrics(const char* const* gold_ids, const rb_ranked* const* results,
                               size_t n, size_t k, double* mrr, double* recall,
                               double* ndcg) {
  return Guard([&] {
    Require(gold_ids && results, "gold_ids and results are required");
    std::vector<RetrievalJudgment> js;
    for (size_t i = 0; i < n; ++i) {
      Require(gold_ids[i] && results[i], "null judgment");
      js.push_back({QueryId(i), gold_ids[i], results[i]->result});
    }
    if (mrr) *mrr = Mrr(js);
    if (recall) *recall = RecallAtK(js, k);
    if (ndcg) *ndcg = NdcgAtK(js, k);
  });
}

rb_status rb_semantic_scores(const char* generated, const char* reference, int flags,
                             double scores[4]) {
  return Guard([&] {
    Require(generated && reference && scores, "generated, reference and scores are required");
    SemanticOptions opts;
    opts.bleu_smoothing = (flags & RB_SEM_BLEU_SMOOTHING) != 0;
    opts.bleu_strict = (flags & RB_SEM_BLEU_STRICT) != 0;
    opts.rouge1_f_measure = (flags & RB_SEM_ROUGE1_F) != 0;
    const SemanticScores s = ScorePair({"", generated, reference}, opts);
    scores[0] = s.exact_match;
    scores[1] = s.bleu;
    scores[2] = s.rouge1;
    scores[3] = s.rouge_l;
  });
}

rb_status rb_radar(const char* inputs_json, int sample_std, char** out_json) {
  return Guard([&] {
    Require(inputs_json && out_json, "inputs_json and out_json are required");
    const Json in = Json::parse(inputs_json);
    Require(in.is_array(), "radar inputs must be an array");
    std::vector<RadarInput> inputs;
    for (const auto& a : in) {
      RadarInput r;
      r.arm = a.at("arm").get<std::string>();
      auto opt = [&](const char* key) -> std::optional<double> {
        if (!a.contains(key) || a.at(key).is_null()) return std::nullopt;
        return a.at(key).get<double>();
      };
      r.mrr_clean = opt("mrr_clean");
      r.mrr_noisy = opt("mrr_noisy");
      r.rouge_l_total = opt("rouge_l_total");
      r.latency_seconds = opt("latency_seconds");
      r.memory_per_1k_docs = opt("memory_per_1k_docs");
      inputs.push_back(r);
    }
    const StdMode mode = sample_std ? StdMode::kSample : StdMode::kPopulation;
    const RadarResult result = RadarScoresFor(inputs, mode);
    *out_json = Dup(RadarToJson(result, sample_std ? "sample" : "population").dump(2));
  });
}

rb_status rb_deterministic_embed(const char* text, size_t dim, float* out) {
  return Guard([&] {
    Require(text && out, "text and out are required");
    DeterministicEmbedder embedder(dim);
    const DenseEmbedding e = EmbedText(embedder, text);
    std::copy(e.values.begin(), e.values.end(), out);
  });
}

}  // extern "C"
