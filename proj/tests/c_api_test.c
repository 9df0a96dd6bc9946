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

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "semsketch/semsketch.h"

static int failures = 0;

#define EXPECT(cond)                                                     \
  do {                                                                   \
    if (!(cond)) {                                                       \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                        \
    }                                                                    \
  } while (0)

#define EXPECT_OK(call)                                                  \
  do {                                                                   \
    semsketch_status_t st_ = (call);                                     \
    if (st_ != SEMSKETCH_OK) {                                           \
      fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call, \
              semsketch_status_string(st_), semsketch_last_error());     \
      ++failures;                                                        \
    }                                                                    \
  } while (0)

static void count_diagnostic(const char* file, const char* message, void* user) {
  (void)file;
  (void)message;
  ++*(int*)user;
}

static void test_errors(void) {
  semsketch_embedding_t* table = NULL;
  EXPECT(semsketch_embedding_load("/nonexistent/table.semb", &table) == SEMSKETCH_ERROR_IO);
  EXPECT(table == NULL);
  EXPECT(strstr(semsketch_last_error(), "nonexistent") != NULL);
  EXPECT(semsketch_embedding_load(NULL, &table) == SEMSKETCH_ERROR_INVALID_ARGUMENT);
  EXPECT(strcmp(semsketch_status_string(SEMSKETCH_OK), "ok") == 0);
  EXPECT(strlen(semsketch_version()) > 0);
}

static void test_encoding(void) {
  semsketch_config_t cfg = {32, 2, 32};
  uint64_t bits = 0;
  double ratio = 0.0;
  EXPECT_OK(semsketch_storage_report(&cfg, 245760, &bits, &ratio));
  EXPECT(bits == 65536);
  EXPECT(fabs(ratio - 65536.0 / 245760.0) < 1e-12);
  EXPECT(semsketch_storage_report(&cfg, 0, &bits, &ratio) == SEMSKETCH_ERROR_INVALID_ARGUMENT);

  const float a[2] = {0.0f, 0.0f}, b[2] = {1.0f, -1.0f};
  double d = 0.0;
  EXPECT_OK(semsketch_l1_distance(a, b, 2, &d));
  EXPECT(d == 2.0);

  semsketch_embedding_t* table = NULL;
  EXPECT_OK(semsketch_embedding_synthetic(5, 2, 3, &table));
  EXPECT(semsketch_embedding_size(table) == 5);
  EXPECT(semsketch_embedding_dims(table) == 2);
  EXPECT(strcmp(semsketch_embedding_label(table, 0), "background") == 0);
  EXPECT(semsketch_embedding_label(table, 5) == NULL);

  const uint32_t cells[4] = {1, 1, 4, 0};
  float out[8], coord[2];
  EXPECT_OK(semsketch_encode_grid(table, 2, cells, 4, out, 8));
  EXPECT_OK(semsketch_embedding_coords(table, 4, coord, 2));
  EXPECT(out[4] == coord[0] && out[5] == coord[1]);
  EXPECT(semsketch_encode_grid(table, 2, cells, 4, out, 7) == SEMSKETCH_ERROR_INVALID_ARGUMENT);
  const uint32_t bad[1] = {9};
  EXPECT(semsketch_encode_grid(table, 1, bad, 1, out, 8) == SEMSKETCH_ERROR_INVALID_ARGUMENT);
  semsketch_embedding_free(table);
}

static void test_store(const char* tmp) {
  char path[1024];
  snprintf(path, sizeof path, "%s/c_api.svs", tmp);
  unlink(path);

  semsketch_embedding_t* table = NULL;
  EXPECT_OK(semsketch_embedding_synthetic(21, 2, 1, &table));
  semsketch_config_t cfg = {8, 2, 16};
  semsketch_store_t* store = NULL;
  EXPECT_OK(semsketch_store_open_or_create(path, &cfg, table, &store));
  EXPECT_OK(semsketch_store_fill_synthetic(store, table, 500, 7, 1000));

  float v[128];
  for (int i = 0; i < 128; ++i) v[i] = (float)((i % 5) - 2) / 2.0f;
  EXPECT_OK(semsketch_store_append(store, 5, v, 128));
  EXPECT(semsketch_store_append(store, 5, v, 128) == SEMSKETCH_ERROR_DUPLICATE);
  EXPECT(semsketch_store_append(store, 6, v, 127) == SEMSKETCH_ERROR_INVALID_ARGUMENT);

  semsketch_store_info_t info;
  EXPECT_OK(semsketch_store_info(store, &info));
  EXPECT(info.count == 501);
  EXPECT(info.dimensions == 128);
  EXPECT(info.writable);

  semsketch_result_t results[10];
  size_t written = 0;
  EXPECT_OK(semsketch_store_knn(store, v, 128, 10, 2, results, 10, &written));
  EXPECT(written == 10);
  EXPECT(results[0].segment_id == 5);
  EXPECT(results[0].rank == 1);
  EXPECT(results[0].distance <= 128.0 * 2.0 / 65535.0);
  for (size_t i = 1; i < written; ++i) EXPECT(results[i].distance >= results[i - 1].distance);
  EXPECT(semsketch_store_knn(store, v, 128, 0, 1, results, 10, &written) == SEMSKETCH_ERROR_INVALID_ARGUMENT);

  semsketch_bench_report_t report;
  EXPECT_OK(semsketch_bench_run(store, table, 3, 1, 2, 10, 9, &report));
  EXPECT(report.vectors == 501);
  EXPECT(report.parallel_checked && report.parallel_matches_serial);
  EXPECT(report.mean_ms > 0.0);
  EXPECT(strlen(report.machine) > 0);
  semsketch_store_free(store);

  semsketch_store_t* reader = NULL;
  EXPECT_OK(semsketch_store_open(path, 1, &reader));
  EXPECT_OK(semsketch_store_info(reader, &info));
  EXPECT(info.count == 501);
  EXPECT(!info.writable);
  EXPECT(info.config.n == 8 && info.config.dims == 2 && info.config.bits == 16);
  EXPECT(semsketch_store_append(reader, 9, v, 128) == SEMSKETCH_ERROR_INVALID_ARGUMENT);
  semsketch_store_free(reader);
  semsketch_embedding_free(table);
  unlink(path);
}

static void test_embedding_and_ingest(const char* data, const char* tmp) {
  char vocab[1024], vectors[1024], out[1024];
  snprintf(vocab, sizeof vocab, "%s/voc21.tsv", data);
  snprintf(vectors, sizeof vectors, "%s/word_vectors.txt", data);
  snprintf(out, sizeof out, "%s/c_api.semb", tmp);

  semsketch_tsne_params_t params;
  semsketch_tsne_params_default(&params);
  EXPECT(params.perplexity == 30.0 && params.iterations == 1000);
  params.iterations = 400;
  semsketch_embedding_t* table = NULL;
  semsketch_embed_summary_t summary;
  EXPECT_OK(semsketch_embedding_build(vocab, vectors, 2, &params, &table, &summary));
  EXPECT(summary.concepts == 21);
  EXPECT(summary.final_kl < summary.initial_kl);
  EXPECT_OK(semsketch_embedding_save(table, out));
  semsketch_embedding_t* loaded = NULL;
  EXPECT_OK(semsketch_embedding_load(out, &loaded));
  EXPECT(semsketch_embedding_size(loaded) == 21);
  EXPECT(strcmp(semsketch_embedding_label(loaded, 11), semsketch_embedding_label(table, 11)) == 0);
  params.learning_rate = -1.0;
  EXPECT(semsketch_embedding_build(vocab, vectors, 2, &params, &loaded, &summary) ==
         SEMSKETCH_ERROR_INVALID_ARGUMENT);

  /* An ingest directory with one valid map and one corrupt file. */
  char dir[1024], file[1100];
  snprintf(dir, sizeof dir, "%s/c_api_maps", tmp);
  EXPECT(system(NULL) != 0);
  char cmd[2200];
  snprintf(cmd, sizeof cmd, "rm -rf '%s' && mkdir -p '%s'", dir, dir);
  EXPECT(system(cmd) == 0);
  snprintf(file, sizeof file, "%s/3.voc.slm", dir);
  FILE* f = fopen(file, "wb");
  const unsigned char map[] = {'S', 'L', 'M', '1', 2, 0, 0, 0, 1, 0, 0, 0, 0, 15, 0, 8, 0};
  fwrite(map, 1, sizeof map, f);
  fclose(f);
  snprintf(file, sizeof file, "%s/4.slm", dir);
  f = fopen(file, "wb");
  fputs("junk", f);
  fclose(f);

  semsketch_config_t cfg = {1, 2, 32};
  semsketch_store_t* store = NULL;
  const float unit[2] = {1.0f, 1.0f};
  EXPECT(semsketch_store_memory(&cfg, NULL, 0, &store) == SEMSKETCH_ERROR_INVALID_ARGUMENT);
  EXPECT_OK(semsketch_store_memory(&cfg, unit, 2, &store));
  int diagnostics = 0;
  semsketch_ingest_summary_t ingest;
  EXPECT_OK(semsketch_ingest_directory(dir, loaded, store, 1, count_diagnostic, &diagnostics, &ingest));
  EXPECT(ingest.files == 2);
  EXPECT(ingest.ingested == 1);
  EXPECT(diagnostics == 1);
  EXPECT(ingest.diagnostics == 1);

  uint32_t cells[1];
  const char* paths[1] = {file};
  EXPECT(semsketch_aggregate_files(paths, 1, 1, 21, cells, 1) == SEMSKETCH_ERROR_FORMAT);
  snprintf(file, sizeof file, "%s/3.voc.slm", dir);
  EXPECT_OK(semsketch_aggregate_files(paths, 1, 1, 21, cells, 1));
  EXPECT(cells[0] == 8); /* tie between 15 and 8 */

  semsketch_store_free(store);
  semsketch_embedding_free(loaded);
  semsketch_embedding_free(table);
  snprintf(cmd, sizeof cmd, "rm -rf '%s'", dir);
  EXPECT(system(cmd) == 0);
  unlink(out);
}

static void test_service(void) {
  semsketch_embedding_t* table = NULL;
  EXPECT_OK(semsketch_embedding_synthetic(4, 2, 2, &table));
  semsketch_config_t cfg = {2, 2, 32};
  semsketch_service_t* service = NULL;
  EXPECT_OK(semsketch_service_create(table, NULL, &cfg, 1, &service));
  int status = 0;
  char* body = NULL;
  EXPECT_OK(semsketch_service_dispatch(service, "GET", "/api/info", NULL, &status, &body));
  EXPECT(status == 200);
  EXPECT(body && strstr(body, "\"count\":0") != NULL);
  semsketch_string_free(body);
  EXPECT_OK(semsketch_service_dispatch(service, "GET", "/api/concepts", NULL, &status, &body));
  EXPECT(status == 200 && strstr(body, "background") != NULL);
  semsketch_string_free(body);
  EXPECT_OK(semsketch_service_dispatch(service, "POST", "/api/query", "{\"n\":2,\"cells\":[0,0,0,0],\"k\":0}",
                                       &status, &body));
  EXPECT(status == 422);
  semsketch_string_free(body);
  EXPECT_OK(semsketch_service_dispatch(service, "GET", "/api/nothing", NULL, &status, &body));
  EXPECT(status == 404);
  semsketch_string_free(body);
  semsketch_service_free(service);
  semsketch_embedding_free(table);
}

int main(int argc, char** argv) {
  if (argc != 3) {
    fprintf(stderr, "usage: %s <data-dir> <tmp-dir>\n", argv[0]);
    return 2;
  }
  test_errors();
  test_encoding();
  test_store(argv[2]);
  test_embedding_and_ingest(argv[1], argv[2]);
  test_service();
  if (failures) {
    fprintf(stderr, "%d expectation(s) failed\n", failures);
    return 1;
  }
  printf("c api: all expectations met\n");
  return 0;
}
