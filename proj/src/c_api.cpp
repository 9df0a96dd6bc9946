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

#include "semsketch/semsketch.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "semsketch/bench.hpp"
#include "semsketch/embedding_table.hpp"
#include "semsketch/encoder.hpp"
#include "semsketch/error.hpp"
#include "semsketch/ingest.hpp"
#include "semsketch/label_map.hpp"
#include "semsketch/service.hpp"
#include "semsketch/vector_store.hpp"

using semsketch::ErrorCode;

extern "C" {

struct semsketch_embedding_ {
  semsketch::EmbeddingTable table;
};

struct semsketch_store_ {
  semsketch::VectorStore store;
};

struct semsketch_service_ {
  semsketch::Service service;
  std::optional<semsketch::HttpServer> http;
};

}  // extern "C"

namespace {

thread_local std::string last_error;

semsketch_status_t set_error(semsketch_status_t status, const char* message) {
  last_error = message;
  return status;
}

template <typename F>
semsketch_status_t guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return SEMSKETCH_OK;
  } catch (const semsketch::Error& e) {
    return set_error(static_cast<semsketch_status_t>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SEMSKETCH_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SEMSKETCH_ERROR_INTERNAL, e.what());
  } catch (...) {
    return set_error(SEMSKETCH_ERROR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* what) {
  if (!condition) semsketch::fail(ErrorCode::kInvalidArgument, what);
}

semsketch::EncoderConfig to_config(const semsketch_config_t* c) {
  require(c != nullptr, "config is NULL");
  return {c->n, c->dims, c->bits};
}

semsketch_config_t from_config(const semsketch::EncoderConfig& c) { return {c.n, c.dims, c.bits}; }

semsketch::TsneParams to_params(const semsketch_tsne_params_t* p) {
  semsketch::TsneParams out;
  if (p == nullptr) return out;
  out.perplexity = p->perplexity;
  out.iterations = p->iterations;
  out.learning_rate = p->learning_rate;
  out.momentum = p->momentum;
  out.final_momentum = p->final_momentum;
  out.momentum_switch_iters = p->momentum_switch_iters;
  out.early_exaggeration = p->early_exaggeration;
  out.early_exaggeration_iters = p->early_exaggeration_iters;
  out.seed = p->seed;
  return out;
}

}  // namespace

extern "C" {

const char* semsketch_last_error(void) { return last_error.c_str(); }

const char* semsketch_status_string(semsketch_status_t status) {
  switch (status) {
    case SEMSKETCH_OK: return "ok";
    case SEMSKETCH_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case SEMSKETCH_ERROR_IO: return "i/o error";
    case SEMSKETCH_ERROR_FORMAT: return "format error";
    case SEMSKETCH_ERROR_NOT_FOUND: return "not found";
    case SEMSKETCH_ERROR_DUPLICATE: return "duplicate";
    case SEMSKETCH_ERROR_NUMERIC: return "numeric error";
    case SEMSKETCH_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* semsketch_version(void) { return "1.0.0"; }

void semsketch_tsne_params_default(semsketch_tsne_params_t* params) {
  if (params == nullptr) return;
  const semsketch::TsneParams d;
  *params = {d.perplexity,         d.iterations, d.learning_rate, d.momentum,
             d.final_momentum,     d.momentum_switch_iters,       d.early_exaggeration,
             d.early_exaggeration_iters, d.seed};
}

semsketch_status_t semsketch_embedding_build(const char* vocabulary_path, const char* vectors_path, int dims,
                                             const semsketch_tsne_params_t* params, semsketch_embedding_t** out,
                                             semsketch_embed_summary_t* summary) {
  return guarded([&] {
    require(vocabulary_path && vectors_path && out, "NULL argument");
    const auto vocab = semsketch::load_vocabulary(vocabulary_path);
    const auto vectors = semsketch::load_word_vectors(vectors_path, vocab);
    auto built = semsketch::build_embedding(vocab, vectors, dims, to_params(params));
    if (summary) {
      *summary = {built.table.size(), built.table.dims(), built.perplexity, built.initial_kl, built.final_kl};
    }
    *out = new semsketch_embedding_t{std::move(built.table)};
  });
}

semsketch_status_t semsketch_embedding_load(const char* path, semsketch_embedding_t** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    *out = new semsketch_embedding_t{semsketch::load_embedding_table(path)};
  });
}

semsketch_status_t semsketch_embedding_save(const semsketch_embedding_t* table, const char* path) {
  return guarded([&] {
    require(table && path, "NULL argument");
    semsketch::persist_embedding_table(table->table, path);
  });
}

semsketch_status_t semsketch_embedding_synthetic(size_t concepts, int dims, uint64_t seed,
                                                 semsketch_embedding_t** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    *out = new semsketch_embedding_t{semsketch::synthetic_embedding_table(concepts, dims, seed)};
  });
}

void semsketch_embedding_free(semsketch_embedding_t* table) { delete table; }

size_t semsketch_embedding_size(const semsketch_embedding_t* table) { return table ? table->table.size() : 0; }

int semsketch_embedding_dims(const semsketch_embedding_t* table) { return table ? table->table.dims() : 0; }

const char* semsketch_embedding_label(const semsketch_embedding_t* table, uint32_t id) {
  if (!table || !table->table.contains(id)) return nullptr;
  return table->table.labels()[id].c_str();
}

semsketch_status_t semsketch_embedding_coords(const semsketch_embedding_t* table, uint32_t id, float* out,
                                              size_t capacity) {
  return guarded([&] {
    require(table && out, "NULL argument");
    if (!table->table.contains(id)) semsketch::fail(ErrorCode::kNotFound, "unknown concept id");
    const auto row = table->table[id];
    require(capacity >= row.size(), "output buffer too small");
    std::copy(row.begin(), row.end(), out);
  });
}

semsketch_status_t semsketch_aggregate_files(const char* const* paths, size_t count, uint32_t n,
                                             size_t vocabulary_size, uint32_t* cells_out, size_t capacity) {
  return guarded([&] {
    require(paths && cells_out, "NULL argument");
    std::vector<semsketch::LabelMap> maps;
    for (size_t i = 0; i < count; ++i) {
      require(paths[i] != nullptr, "NULL path");
      maps.push_back(semsketch::read_label_map_file(paths[i], vocabulary_size));
    }
    const auto grid = semsketch::aggregate(maps, n);
    require(capacity >= grid.cells.size(), "output buffer too small");
    std::copy(grid.cells.begin(), grid.cells.end(), cells_out);
  });
}

semsketch_status_t semsketch_encode_grid(const semsketch_embedding_t* table, uint32_t n, const uint32_t* cells,
                                         size_t cell_count, float* out, size_t capacity) {
  return guarded([&] {
    require(table && cells && out, "NULL argument");
    semsketch::GridMap grid{n, std::vector<semsketch::ConceptId>(cells, cells + cell_count)};
    const auto v = semsketch::encode_grid(grid, table->table);
    require(capacity >= v.values.size(), "output buffer too small");
    std::copy(v.values.begin(), v.values.end(), out);
  });
}

semsketch_status_t semsketch_l1_distance(const float* a, const float* b, size_t len, double* out) {
  return guarded([&] {
    require((a && b) || len == 0, "NULL argument");
    require(out != nullptr, "NULL argument");
    *out = semsketch::l1_distance({a, len}, {b, len});
  });
}

semsketch_status_t semsketch_storage_report(const semsketch_config_t* config, uint64_t baseline_bits,
                                            uint64_t* bits_out, double* ratio_out) {
  return guarded([&] {
    const auto r = semsketch::storage_report(to_config(config), baseline_bits);
    if (bits_out) *bits_out = r.bits_per_vector;
    if (ratio_out) *ratio_out = r.ratio;
  });
}

semsketch_status_t semsketch_store_create(const char* path, const semsketch_config_t* config, const float* scale,
                                          size_t scale_len, semsketch_store_t** out) {
  return guarded([&] {
    require(path && scale && out, "NULL argument");
    *out = new semsketch_store_t{semsketch::VectorStore::create(path, to_config(config), {scale, scale_len})};
  });
}

semsketch_status_t semsketch_store_open(const char* path, int read_only, semsketch_store_t** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    const auto mode = read_only ? semsketch::OpenMode::kReadOnly : semsketch::OpenMode::kReadWrite;
    *out = new semsketch_store_t{semsketch::VectorStore::open(path, mode)};
  });
}

semsketch_status_t semsketch_store_open_or_create(const char* path, const semsketch_config_t* config,
                                                  const semsketch_embedding_t* table, semsketch_store_t** out) {
  return guarded([&] {
    require(path && table && out, "NULL argument");
    *out = new semsketch_store_t{
        semsketch::VectorStore::open_or_create(path, to_config(config), table->table.scale())};
  });
}

semsketch_status_t semsketch_store_memory(const semsketch_config_t* config, const float* scale, size_t scale_len,
                                          semsketch_store_t** out) {
  return guarded([&] {
    require(scale && out, "NULL argument");
    *out = new semsketch_store_t{semsketch::VectorStore::in_memory(to_config(config), {scale, scale_len})};
  });
}

void semsketch_store_free(semsketch_store_t* store) { delete store; }

semsketch_status_t semsketch_store_info(const semsketch_store_t* store, semsketch_store_info_t* out) {
  return guarded([&] {
    require(store && out, "NULL argument");
    *out = {from_config(store->store.config()), store->store.count(), store->store.dimensions(),
            store->store.writable() ? 1 : 0};
  });
}

semsketch_status_t semsketch_store_append(semsketch_store_t* store, uint64_t segment_id, const float* values,
                                          size_t len) {
  return guarded([&] {
    require(store && values, "NULL argument");
    const auto& cfg = store->store.config();
    semsketch::SemanticFeatureVector v{cfg.n, cfg.dims, std::vector<float>(values, values + len)};
    store->store.append(segment_id, v);
  });
}

semsketch_status_t semsketch_store_knn(const semsketch_store_t* store, const float* query, size_t len, size_t k,
                                       size_t threads, semsketch_result_t* results, size_t capacity,
                                       size_t* written) {
  return guarded([&] {
    require(store && query && written, "NULL argument");
    require(results != nullptr || capacity == 0, "NULL result buffer");
    const auto found = store->store.knn({query, len}, k, threads);
    const auto n = std::min(found.size(), capacity);
    for (size_t i = 0; i < n; ++i) results[i] = {found[i].segment_id, found[i].distance, found[i].rank};
    *written = n;
  });
}

semsketch_status_t semsketch_store_fill_synthetic(semsketch_store_t* store, const semsketch_embedding_t* table,
                                                  size_t count, uint64_t seed, uint64_t first_id) {
  return guarded([&] {
    require(store && table, "NULL argument");
    semsketch::fill_synthetic(store->store, table->table, count, seed, first_id);
  });
}

semsketch_status_t semsketch_ingest_directory(const char* dir, const semsketch_embedding_t* table,
                                              semsketch_store_t* store, size_t threads,
                                              semsketch_diagnostic_fn on_diagnostic, void* user,
                                              semsketch_ingest_summary_t* out) {
  return guarded([&] {
    require(dir && table && store, "NULL argument");
    const auto summary = semsketch::ingest_directory(dir, table->table, store->store, threads);
    if (on_diagnostic) {
      for (const auto& d : summary.diagnostics) on_diagnostic(d.file.c_str(), d.message.c_str(), user);
    }
    if (out) *out = {summary.files, summary.segments, summary.ingested, summary.diagnostics.size()};
  });
}

semsketch_status_t semsketch_bench_run(const semsketch_store_t* store, const semsketch_embedding_t* table,
                                       size_t num_queries, size_t repetitions, size_t threads, size_t k,
                                       uint64_t seed, semsketch_bench_report_t* out) {
  return guarded([&] {
    require(store && table && out, "NULL argument");
    if (table->table.dims() != store->store.config().dims) {
      semsketch::fail(ErrorCode::kInvalidArgument, "embedding table and store disagree on d");
    }
    const auto queries = semsketch::synthetic_queries(table->table, store->store.config().n, num_queries, seed);
    const auto r = semsketch::scan_benchmark(store->store, queries, repetitions, threads, k);
    *out = {};
    out->vectors = r.vectors;
    out->dimensions = r.dimensions;
    out->queries = r.queries;
    out->repetitions = r.repetitions;
    out->threads = r.threads;
    out->k = r.k;
    out->mean_ms = r.mean_ms;
    out->p50_ms = r.p50_ms;
    out->p95_ms = r.p95_ms;
    out->vector_dims_per_ms = r.vector_dims_per_ms;
    out->extrapolated_ms = r.extrapolated_ms;
    out->parallel_checked = r.parallel_checked ? 1 : 0;
    out->parallel_matches_serial = r.parallel_matches_serial ? 1 : 0;
    std::strncpy(out->machine, r.machine.c_str(), sizeof(out->machine) - 1);
  });
}

semsketch_status_t semsketch_service_create(const semsketch_embedding_t* table, const char* store_path,
                                            const semsketch_config_t* config, size_t query_threads,
                                            semsketch_service_t** out) {
  return guarded([&] {
    require(table && out, "NULL argument");
    const auto cfg = to_config(config);
    auto store = store_path ? semsketch::VectorStore::open_or_create(store_path, cfg, table->table.scale())
                            : semsketch::VectorStore::in_memory(cfg, table->table.scale());
    *out = new semsketch_service_t{semsketch::Service(table->table, std::move(store), query_threads), {}};
  });
}

void semsketch_service_free(semsketch_service_t* service) { delete service; }

semsketch_status_t semsketch_service_dispatch(semsketch_service_t* service, const char* method, const char* path,
                                              const char* body, int* http_status, char** body_out) {
  return guarded([&] {
    require(service && method && path && http_status && body_out, "NULL argument");
    const std::string m = method;
    const std::string p = path;
    semsketch::Response r;
    if (m == "GET" && p == "/api/concepts") {
      r = service->service.concepts();
    } else if (m == "GET" && p == "/api/info") {
      r = service->service.info();
    } else if (m == "POST" && p == "/api/query") {
      r = service->service.query(body ? body : "");
    } else {
      r = {404, R"({"error":"no such endpoint"})"};
    }
    *http_status = r.status;
    *body_out = static_cast<char*>(std::malloc(r.body.size() + 1));
    if (*body_out == nullptr) throw std::bad_alloc();
    std::memcpy(*body_out, r.body.c_str(), r.body.size() + 1);
  });
}

semsketch_status_t semsketch_service_bind(semsketch_service_t* service, const char* host, int port,
                                          int* bound_port) {
  return guarded([&] {
    require(service && host, "NULL argument");
    if (!service->http) service->http.emplace(service->service);
    const int bound = service->http->bind(host, port);
    if (bound_port) *bound_port = bound;
  });
}

semsketch_status_t semsketch_service_run(semsketch_service_t* service) {
  return guarded([&] {
    require(service != nullptr, "NULL argument");
    if (!service->http) semsketch::fail(ErrorCode::kInvalidArgument, "service is not bound");
    service->http->listen();
  });
}

void semsketch_service_stop(semsketch_service_t* service) {
  if (service && service->http) service->http->stop();
}

void semsketch_string_free(char* s) { std::free(s); }

}  // extern "C"
