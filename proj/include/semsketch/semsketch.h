/*
  Copyright (c) 2026 The semsketch Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef SEMSKETCH_H
#define SEMSKETCH_H

/*
 * C interface to the semsketch retrieval engine.
 *
 * Every fallible function returns a semsketch_status_t. On failure a
 * human-readable message is available from semsketch_last_error() until the
 * next call on the same thread. Handles are opaque and must be released
 * with the matching *_free function; passing NULL to a *_free function is
 * a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SEMSKETCH_EXPORT __declspec(dllexport)
#elif defined(__GNUC__)
#define SEMSKETCH_EXPORT __attribute__((visibility("default")))
#else
#define SEMSKETCH_EXPORT
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum semsketch_status_ {
  SEMSKETCH_OK = 0,
  SEMSKETCH_ERROR_INVALID_ARGUMENT = 1,
  SEMSKETCH_ERROR_IO = 2,
  SEMSKETCH_ERROR_FORMAT = 3,
  SEMSKETCH_ERROR_NOT_FOUND = 4,
  SEMSKETCH_ERROR_DUPLICATE = 5,
  SEMSKETCH_ERROR_NUMERIC = 6,
  SEMSKETCH_ERROR_INTERNAL = 7
} semsketch_status_t;

#define SEMSKETCH_BASELINE_BITS 245760ULL
#define SEMSKETCH_REFERENCE_COLLECTION_SIZE 1046235ULL

typedef struct semsketch_embedding_ semsketch_embedding_t;
typedef struct semsketch_store_ semsketch_store_t;
typedef struct semsketch_service_ semsketch_service_t;

SEMSKETCH_EXPORT const char* semsketch_last_error(void);
SEMSKETCH_EXPORT const char* semsketch_status_string(semsketch_status_t status);
SEMSKETCH_EXPORT const char* semsketch_version(void);

/* Encoder configuration: grid side n, embedding dims d (2 or 3), bits per
 * stored dimension (8, 16 or 32). */
typedef struct semsketch_config_ {
  uint32_t n;
  int dims;
  int bits;
} semsketch_config_t;

/* ---- concept embedding ------------------------------------------------ */

typedef struct semsketch_tsne_params_ {
  double perplexity;
  int iterations;
  double learning_rate;
  double momentum;
  double final_momentum;
  int momentum_switch_iters;
  double early_exaggeration;
  int early_exaggeration_iters;
  uint64_t seed;
} semsketch_tsne_params_t;

typedef struct semsketch_embed_summary_ {
  size_t concepts;
  int dims;
  double perplexity; /* after capping at (m - 1) / 3 */
  double initial_kl;
  double final_kl;
} semsketch_embed_summary_t;

SEMSKETCH_EXPORT void semsketch_tsne_params_default(semsketch_tsne_params_t* params);

/* Vocabulary + word vectors -> t-SNE -> normalized table. `summary` may be NULL. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_embedding_build(const char* vocabulary_path,
                                                              const char* vectors_path, int dims,
                                                              const semsketch_tsne_params_t* params,
                                                              semsketch_embedding_t** out,
                                                              semsketch_embed_summary_t* summary);
SEMSKETCH_EXPORT semsketch_status_t semsketch_embedding_load(const char* path, semsketch_embedding_t** out);
SEMSKETCH_EXPORT semsketch_status_t semsketch_embedding_save(const semsketch_embedding_t* table, const char* path);
/* Random coordinates in [-1, 1]; for benchmarks without a corpus. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_embedding_synthetic(size_t concepts, int dims, uint64_t seed,
                                                                  semsketch_embedding_t** out);
SEMSKETCH_EXPORT void semsketch_embedding_free(semsketch_embedding_t* table);
SEMSKETCH_EXPORT size_t semsketch_embedding_size(const semsketch_embedding_t* table);
SEMSKETCH_EXPORT int semsketch_embedding_dims(const semsketch_embedding_t* table);
/* NULL when `id` is out of range. Valid for the lifetime of `table`. */
SEMSKETCH_EXPORT const char* semsketch_embedding_label(const semsketch_embedding_t* table, uint32_t id);
SEMSKETCH_EXPORT semsketch_status_t semsketch_embedding_coords(const semsketch_embedding_t* table, uint32_t id,
                                                               float* out, size_t capacity);

/* ---- label maps and encoding ------------------------------------------ */

/* Reads `count` SLM1 files and writes the n*n majority grid to `cells_out`.
 * vocabulary_size == 0 disables the id range check. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_aggregate_files(const char* const* paths, size_t count, uint32_t n,
                                                              size_t vocabulary_size, uint32_t* cells_out,
                                                              size_t capacity);
/* Writes n*n*d floats. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_encode_grid(const semsketch_embedding_t* table, uint32_t n,
                                                          const uint32_t* cells, size_t cell_count, float* out,
                                                          size_t capacity);
SEMSKETCH_EXPORT semsketch_status_t semsketch_l1_distance(const float* a, const float* b, size_t len,
                                                          double* out);
/* bits = n*n*d*b, ratio = bits / baseline_bits. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_storage_report(const semsketch_config_t* config,
                                                             uint64_t baseline_bits, uint64_t* bits_out,
                                                             double* ratio_out);

/* ---- vector store ----------------------------------------------------- */

typedef struct semsketch_store_info_ {
  semsketch_config_t config;
  uint64_t count;
  size_t dimensions;
  int writable;
} semsketch_store_info_t;

typedef struct semsketch_result_ {
  uint64_t segment_id;
  double distance;
  uint32_t rank;
} semsketch_result_t;

SEMSKETCH_EXPORT semsketch_status_t semsketch_store_create(const char* path, const semsketch_config_t* config,
                                                           const float* scale, size_t scale_len,
                                                           semsketch_store_t** out);
SEMSKETCH_EXPORT semsketch_status_t semsketch_store_open(const char* path, int read_only, semsketch_store_t** out);
/* Creates the store with the table's scale if absent; otherwise opens it and
 * checks that n, d, b and the scale match. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_store_open_or_create(const char* path, const semsketch_config_t* config,
                                                                   const semsketch_embedding_t* table,
                                                                   semsketch_store_t** out);
SEMSKETCH_EXPORT semsketch_status_t semsketch_store_memory(const semsketch_config_t* config, const float* scale,
                                                           size_t scale_len, semsketch_store_t** out);
SEMSKETCH_EXPORT void semsketch_store_free(semsketch_store_t* store);
SEMSKETCH_EXPORT semsketch_status_t semsketch_store_info(const semsketch_store_t* store,
                                                         semsketch_store_info_t* out);
SEMSKETCH_EXPORT semsketch_status_t semsketch_store_append(semsketch_store_t* store, uint64_t segment_id,
                                                           const float* values, size_t len);
/* Writes min(k, count, capacity) results; *written receives the count. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_store_knn(const semsketch_store_t* store, const float* query,
                                                        size_t len, size_t k, size_t threads,
                                                        semsketch_result_t* results, size_t capacity,
                                                        size_t* written);
SEMSKETCH_EXPORT semsketch_status_t semsketch_store_fill_synthetic(semsketch_store_t* store,
                                                                   const semsketch_embedding_t* table, size_t count,
                                                                   uint64_t seed, uint64_t first_id);

/* ---- ingestion -------------------------------------------------------- */

typedef void (*semsketch_diagnostic_fn)(const char* file, const char* message, void* user);

typedef struct semsketch_ingest_summary_ {
  size_t files;
  size_t segments;
  size_t ingested;
  size_t diagnostics;
} semsketch_ingest_summary_t;

/* Files are named <segment_id>[.<source>].slm; files sharing an id are
 * pooled. `on_diagnostic` may be NULL. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_ingest_directory(const char* dir, const semsketch_embedding_t* table,
                                                               semsketch_store_t* store, size_t threads,
                                                               semsketch_diagnostic_fn on_diagnostic, void* user,
                                                               semsketch_ingest_summary_t* out);

/* ---- benchmark -------------------------------------------------------- */

typedef struct semsketch_bench_report_ {
  uint64_t vectors;
  size_t dimensions;
  size_t queries;
  size_t repetitions;
  size_t threads;
  size_t k;
  double mean_ms;
  double p50_ms;
  double p95_ms;
  double vector_dims_per_ms;
  double extrapolated_ms; /* mean_ms scaled to SEMSKETCH_REFERENCE_COLLECTION_SIZE vectors */
  int parallel_checked;
  int parallel_matches_serial;
  char machine[256];
} semsketch_bench_report_t;

/* Queries are random grids encoded with `table`. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_bench_run(const semsketch_store_t* store,
                                                        const semsketch_embedding_t* table, size_t num_queries,
                                                        size_t repetitions, size_t threads, size_t k,
                                                        uint64_t seed, semsketch_bench_report_t* out);

/* ---- service ---------------------------------------------------------- */

/* Opens (or creates) the store at `store_path`; NULL keeps it in memory. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_service_create(const semsketch_embedding_t* table,
                                                             const char* store_path,
                                                             const semsketch_config_t* config,
                                                             size_t query_threads, semsketch_service_t** out);
SEMSKETCH_EXPORT void semsketch_service_free(semsketch_service_t* service);
/* Handles GET /api/concepts, GET /api/info and POST /api/query without a
 * socket. *body_out must be released with semsketch_string_free. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_service_dispatch(semsketch_service_t* service, const char* method,
                                                               const char* path, const char* body,
                                                               int* http_status, char** body_out);
/* port 0 picks a free port; *bound_port receives the port in use. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_service_bind(semsketch_service_t* service, const char* host, int port,
                                                           int* bound_port);
/* Blocks until semsketch_service_stop is called from another thread. */
SEMSKETCH_EXPORT semsketch_status_t semsketch_service_run(semsketch_service_t* service);
SEMSKETCH_EXPORT void semsketch_service_stop(semsketch_service_t* service);

SEMSKETCH_EXPORT void semsketch_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SEMSKETCH_H */
