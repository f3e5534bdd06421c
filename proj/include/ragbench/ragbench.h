/* Copyright 2026 The ragbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libragbench.
 *
 * Every fallible call returns an rb_status. On failure rb_last_error()
 * returns a message for the calling thread, valid until its next call into
 * the library. Strings handed out through char** parameters are owned by
 * the caller and released with rb_string_free. Handles are released with
 * their *_free function; passing NULL to any *_free is a no-op.
 */

#ifndef RAGBENCH_RAGBENCH_H_
#define RAGBENCH_RAGBENCH_H_

#include <stddef.h>

#if defined(_WIN32)
#define RB_API __declspec(dllexport)
#else
#define RB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rb_status {
  RB_OK = 0,
  RB_ERR_INVALID_ARGUMENT = 1,
  RB_ERR_CONFIG = 2,
  RB_ERR_PROVIDER = 3,
  RB_ERR_DATA = 4,
  RB_ERR_IO = 5,
  RB_ERR_INTERNAL = 6
} rb_status;

typedef enum rb_format {
  RB_FORMAT_JSON = 0,
  RB_FORMAT_CSV = 1,
  RB_FORMAT_TEXT = 2
} rb_format;

typedef struct rb_config rb_config;
typedef struct rb_dense_index rb_dense_index;
typedef struct rb_late_index rb_late_index;
typedef struct rb_ranked rb_ranked;

RB_API const char* rb_version(void);
RB_API const char* rb_last_error(void);
RB_API void rb_string_free(char* s);

/* Corpus validation. `report_json` receives every finding; `violations`
 * their count. When the file cannot be read the call returns RB_ERR_IO and
 * still fills `report_json`. */
RB_API rb_status rb_validate_corpus(const char* path, const char* const* channels,
                                    size_t n_channels, char** report_json,
                                    size_t* violations);

/* Configuration. */
RB_API rb_status rb_config_load(const char* path, rb_config** out);
/* "dotted.key=value"; rejected keys and mistyped values leave the config
 * untouched. */
RB_API rb_status rb_config_set(rb_config* config, const char* assignment);
RB_API rb_status rb_config_to_json(const rb_config* config, char** out);
RB_API void rb_config_free(rb_config* config);

/* Pipeline stages. Each writes its artifacts under the configured output
 * directory and returns a JSON document. */
RB_API rb_status rb_run_experiment(const rb_config* config, char** report_json);
RB_API rb_status rb_profile(const rb_config* config, const char* arm,
                            char** stats_json);
RB_API rb_status rb_generate_qa(const rb_config* config, char** pairs_json);
RB_API rb_status rb_embed(const rb_config* config, char** summary_json);
RB_API rb_status rb_build_indexes(const rb_config* config, char** summary_json);
RB_API rb_status rb_report_render(const char* report_json, rb_format format,
                                  int radar, char** out);

/* Dense index over row-major float vectors, n rows of `dim`. */
RB_API rb_status rb_dense_index_build(const char* const* ids, const float* vectors,
                                      size_t n, size_t dim, rb_dense_index** out);
RB_API rb_status rb_dense_index_load(const char* path, rb_dense_index** out);
RB_API rb_status rb_dense_index_save(const rb_dense_index* index, const char* path,
                                     size_t* bytes_written);
RB_API rb_status rb_dense_index_query(const rb_dense_index* index, const float* q,
                                      size_t dim, size_t k, rb_ranked** out);
RB_API size_t rb_dense_index_size(const rb_dense_index* index);
RB_API size_t rb_dense_index_dim(const rb_dense_index* index);
RB_API size_t rb_dense_index_memory_bytes(const rb_dense_index* index);
RB_API void rb_dense_index_free(rb_dense_index* index);

/* Late-interaction index. Document d owns group_sizes[d] consecutive rows
 * of `vectors`. */
RB_API rb_status rb_late_index_build(const char* const* ids, const size_t* group_sizes,
                                     const float* vectors, size_t n_docs, size_t dim,
                                     rb_late_index** out);
RB_API rb_status rb_late_index_load(const char* path, rb_late_index** out);
RB_API rb_status rb_late_index_save(const rb_late_index* index, const char* path,
                                    size_t* bytes_written);
RB_API rb_status rb_late_index_query(const rb_late_index* index, const float* q,
                                     size_t dim, size_t k, size_t threads,
                                     rb_ranked** out);
/* Sum over the n_q query vectors of each one's MaxSim. */
RB_API rb_status rb_late_index_query_multi(const rb_late_index* index,
                                           const float* q, size_t n_q, size_t dim,
                                           size_t k, size_t threads, rb_ranked** out);
RB_API size_t rb_late_index_size(const rb_late_index* index);
RB_API size_t rb_late_index_vector_count(const rb_late_index* index);
RB_API size_t rb_late_index_memory_bytes(const rb_late_index* index);
RB_API void rb_late_index_free(rb_late_index* index);

/* Ranked results; entries are in rank order. */
RB_API size_t rb_ranked_count(const rb_ranked* r);
RB_API const char* rb_ranked_doc_id(const rb_ranked* r, size_t i);
RB_API double rb_ranked_score(const rb_ranked* r, size_t i);
RB_API void rb_ranked_free(rb_ranked* r);

/* Retrieval metrics over n judgments (gold id + ranked result each). */
RB_API rb_status rb_retrieval_metrics(const char* const* gold_ids,
                                      const rb_ranked* const* results, size_t n,
                                      size_t k, double* mrr, double* recall,
                                      double* ndcg);

/* Semantic scores for one pair: scores[0..3] = exact match, BLEU, ROUGE-1,
 * ROUGE-L. */
#define RB_SEM_BLEU_SMOOTHING 1
#define RB_SEM_BLEU_STRICT 2
#define RB_SEM_ROUGE1_F 4
RB_API rb_status rb_semantic_scores(const char* generated, const char* reference,
                                    int flags, double scores[4]);

/* Radar scores. `inputs_json` is an array of objects with "arm" and any of
 * mrr_clean, mrr_noisy, rouge_l_total, latency_seconds, memory_per_1k_docs. */
RB_API rb_status rb_radar(const char* inputs_json, int sample_std, char** out_json);

/* Deterministic offline embedding of one text into out[0..dim). */
RB_API rb_status rb_deterministic_embed(const char* text, size_t dim, float* out);

#ifdef __cplusplus
}
#endif

#endif  /* RAGBENCH_RAGBENCH_H_ */
