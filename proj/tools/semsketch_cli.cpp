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

// Command-line front end. Everything goes through the C API in semsketch.h.

#include <pthread.h>

#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semsketch/semsketch.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct CliError {
  int exit_code;
  std::string message;
};

void check(semsketch_status_t status) {
  if (status == SEMSKETCH_OK) return;
  throw CliError{status == SEMSKETCH_ERROR_IO ? kExitIo : kExitValidation,
                 std::string(semsketch_status_string(status)) + ": " + semsketch_last_error()};
}

[[noreturn]] void invalid(const std::string& message) { throw CliError{kExitValidation, message}; }

struct EmbeddingDeleter {
  void operator()(semsketch_embedding_t* p) const { semsketch_embedding_free(p); }
};
struct StoreDeleter {
  void operator()(semsketch_store_t* p) const { semsketch_store_free(p); }
};
struct ServiceDeleter {
  void operator()(semsketch_service_t* p) const { semsketch_service_free(p); }
};
using Embedding = std::unique_ptr<semsketch_embedding_t, EmbeddingDeleter>;
using Store = std::unique_ptr<semsketch_store_t, StoreDeleter>;
using Service = std::unique_ptr<semsketch_service_t, ServiceDeleter>;

Embedding load_embedding(const std::string& path) {
  semsketch_embedding_t* raw = nullptr;
  check(semsketch_embedding_load(path.c_str(), &raw));
  return Embedding(raw);
}

semsketch_store_info_t store_info(const semsketch_store_t* store) {
  semsketch_store_info_t info{};
  check(semsketch_store_info(store, &info));
  return info;
}

std::string format_percent(double ratio) {
  const double pct = ratio * 100.0;
  char buf[64];
  if (pct >= 1.0) {
    std::snprintf(buf, sizeof buf, "%.1f%%", pct);
  } else {
    std::snprintf(buf, sizeof buf, "%.3g%%", pct);
  }
  return buf;
}

semsketch_config_t parse_config(const std::string& text) {
  semsketch_config_t c{};
  char sep1 = 0;
  char sep2 = 0;
  std::istringstream in(text);
  if (!(in >> c.n >> sep1 >> c.dims >> sep2 >> c.bits) || sep1 != ',' || sep2 != ',' || !in.eof()) {
    invalid("--config expects n,d,b (got '" + text + "')");
  }
  return c;
}

// ---- embed ----------------------------------------------------------------

struct EmbedArgs {
  std::string vocab, vectors, out;
  int d = 2;
  semsketch_tsne_params_t tsne{};
};

int run_embed(EmbedArgs& a) {
  semsketch_embedding_t* raw = nullptr;
  semsketch_embed_summary_t summary{};
  check(semsketch_embedding_build(a.vocab.c_str(), a.vectors.c_str(), a.d, &a.tsne, &raw, &summary));
  Embedding table(raw);
  check(semsketch_embedding_save(table.get(), a.out.c_str()));
  std::printf("concepts: %zu\nd: %d\nperplexity: %.4f\ninitial KL: %.6f\nfinal KL: %.6f\nwrote %s\n",
              summary.concepts, summary.dims, summary.perplexity, summary.initial_kl, summary.final_kl,
              a.out.c_str());
  return kExitOk;
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string maps, table, store;
  semsketch_config_t config{32, 0, 32};
  size_t threads = 1;
};

int run_ingest(IngestArgs& a) {
  auto table = load_embedding(a.table);
  a.config.dims = semsketch_embedding_dims(table.get());
  semsketch_store_t* raw = nullptr;
  check(semsketch_store_open_or_create(a.store.c_str(), &a.config, table.get(), &raw));
  Store store(raw);
  semsketch_ingest_summary_t summary{};
  auto report = [](const char* file, const char* message, void*) {
    std::fprintf(stderr, "skipped %s: %s\n", file, message);
  };
  check(semsketch_ingest_directory(a.maps.c_str(), table.get(), store.get(), a.threads, report, nullptr, &summary));
  const auto info = store_info(store.get());
  std::printf("files: %zu\nsegments: %zu\ningested: %zu\ndiagnostics: %zu\nstore count: %llu\n", summary.files,
              summary.segments, summary.ingested, summary.diagnostics,
              static_cast<unsigned long long>(info.count));
  return kExitOk;
}

// ---- query ----------------------------------------------------------------

struct QueryArgs {
  std::string store, table, sketch;
  std::vector<std::string> maps;
  size_t k = 10;
  size_t threads = 1;
  bool csv = false;
};

std::vector<uint32_t> read_sketch(const std::string& path, uint32_t n) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitIo, "cannot open sketch " + path};
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("n") || !doc.contains("cells") ||
      !doc["n"].is_number_unsigned() || !doc["cells"].is_array()) {
    invalid("sketch must be a JSON object {\"n\": ..., \"cells\": [...]}");
  }
  if (doc["n"].get<uint32_t>() != n) invalid("sketch n does not match the store grid size " + std::to_string(n));
  std::vector<uint32_t> cells;
  for (const auto& c : doc["cells"]) {
    if (!c.is_number_unsigned()) invalid("sketch cells must be non-negative integers");
    cells.push_back(c.get<uint32_t>());
  }
  return cells;
}

int run_query(QueryArgs& a) {
  if (a.maps.empty() == a.sketch.empty()) invalid("give either --map (one or more) or --sketch");
  if (a.k < 1) invalid("--k must be at least 1");
  auto table = load_embedding(a.table);
  semsketch_store_t* raw = nullptr;
  check(semsketch_store_open(a.store.c_str(), 1, &raw));
  Store store(raw);
  const auto info = store_info(store.get());
  const uint32_t n = info.config.n;

  std::vector<uint32_t> cells(static_cast<size_t>(n) * n);
  if (!a.sketch.empty()) {
    cells = read_sketch(a.sketch, n);
  } else {
    std::vector<const char*> paths;
    for (const auto& m : a.maps) paths.push_back(m.c_str());
    check(semsketch_aggregate_files(paths.data(), paths.size(), n, semsketch_embedding_size(table.get()),
                                    cells.data(), cells.size()));
  }
  std::vector<float> query(info.dimensions);
  check(semsketch_encode_grid(table.get(), n, cells.data(), cells.size(), query.data(), query.size()));
  std::vector<semsketch_result_t> results(a.k);
  size_t written = 0;
  check(semsketch_store_knn(store.get(), query.data(), query.size(), a.k, a.threads, results.data(), results.size(),
                            &written));
  if (a.csv) std::printf("rank,segment_id,distance\n");
  else std::printf("%6s  %20s  %14s\n", "rank", "segment_id", "distance");
  for (size_t i = 0; i < written; ++i) {
    const auto& r = results[i];
    if (a.csv) {
      std::printf("%u,%llu,%.9g\n", r.rank, static_cast<unsigned long long>(r.segment_id), r.distance);
    } else {
      std::printf("%6u  %20llu  %14.6f\n", r.rank, static_cast<unsigned long long>(r.segment_id), r.distance);
    }
  }
  return kExitOk;
}

// ---- serve ----------------------------------------------------------------

struct ServeArgs {
  std::string table, store, host = "127.0.0.1";
  int port = 8080;
  semsketch_config_t config{32, 0, 32};
  size_t threads = 1;
};

int run_serve(ServeArgs& a) {
  auto table = load_embedding(a.table);
  a.config.dims = semsketch_embedding_dims(table.get());
  semsketch_service_t* raw = nullptr;
  check(semsketch_service_create(table.get(), a.store.empty() ? nullptr : a.store.c_str(), &a.config, a.threads,
                                 &raw));
  Service service(raw);

  // SIGINT and SIGTERM stop the server cleanly.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (sig == SIGTERM || sig == SIGINT) semsketch_service_stop(service.get());
  });
  struct Join {
    std::thread& t;
    ~Join() {
      pthread_kill(t.native_handle(), SIGTERM);
      t.join();
    }
  } join{waiter};

  int port = 0;
  check(semsketch_service_bind(service.get(), a.host.c_str(), a.port, &port));
  std::printf("listening on http://%s:%d\n", a.host.c_str(), port);
  std::fflush(stdout);
  check(semsketch_service_run(service.get()));
  return kExitOk;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string store, table;
  size_t generate = 0;
  size_t concepts = 21;
  size_t queries = 10;
  size_t repetitions = 3;
  size_t threads = 1;
  size_t k = 10;
  uint64_t seed = 42;
  semsketch_config_t config{32, 2, 32};
  bool csv = false;
};

int run_bench(BenchArgs& a) {
  if (a.repetitions == 0) invalid("--repetitions must be positive");
  if (a.queries == 0) invalid("--queries must be positive");
  if (a.store.empty() && a.generate == 0) invalid("give --store, --generate, or both");

  Store store;
  semsketch_store_t* raw = nullptr;
  const bool store_exists = !a.store.empty() && std::ifstream(a.store).good();
  if (store_exists || (!a.store.empty() && a.generate == 0)) {
    check(semsketch_store_open(a.store.c_str(), a.generate == 0 ? 1 : 0, &raw));
    store.reset(raw);
    a.config = store_info(store.get()).config;
  }

  Embedding table;
  if (!a.table.empty()) {
    table = load_embedding(a.table);
    a.config.dims = semsketch_embedding_dims(table.get());
  } else {
    semsketch_embedding_t* t = nullptr;
    check(semsketch_embedding_synthetic(a.concepts, a.config.dims, a.seed, &t));
    table.reset(t);
  }

  if (!store) {
    std::vector<float> scale(static_cast<size_t>(a.config.dims), 1.0f);
    if (a.store.empty()) {
      check(semsketch_store_memory(&a.config, scale.data(), scale.size(), &raw));
    } else {
      check(semsketch_store_create(a.store.c_str(), &a.config, scale.data(), scale.size(), &raw));
    }
    store.reset(raw);
  }
  if (a.generate > 0) {
    const auto before = store_info(store.get()).count;
    check(semsketch_store_fill_synthetic(store.get(), table.get(), a.generate, a.seed, before));
  }

  semsketch_bench_report_t r{};
  check(semsketch_bench_run(store.get(), table.get(), a.queries, a.repetitions, a.threads, a.k, a.seed + 1, &r));
  const char* parallel = !r.parallel_checked ? "n/a" : (r.parallel_matches_serial ? "identical" : "MISMATCH");
  if (a.csv) {
    std::printf("vectors,dimensions,queries,repetitions,threads,k,mean_ms,p50_ms,p95_ms,vector_dims_per_ms,"
                "extrapolated_ms,parallel_vs_serial\n");
    std::printf("%llu,%zu,%zu,%zu,%zu,%zu,%.6f,%.6f,%.6f,%.1f,%.3f,%s\n",
                static_cast<unsigned long long>(r.vectors), r.dimensions, r.queries, r.repetitions, r.threads, r.k,
                r.mean_ms, r.p50_ms, r.p95_ms, r.vector_dims_per_ms, r.extrapolated_ms, parallel);
  } else {
    std::printf("machine:            %s\n", r.machine);
    std::printf("vectors:            %llu x %zu dims\n", static_cast<unsigned long long>(r.vectors), r.dimensions);
    std::printf("queries:            %zu x %zu repetitions, k=%zu, %zu thread(s)\n", r.queries, r.repetitions, r.k,
                r.threads);
    std::printf("scan time mean:     %.3f ms\n", r.mean_ms);
    std::printf("scan time p50:      %.3f ms\n", r.p50_ms);
    std::printf("scan time p95:      %.3f ms\n", r.p95_ms);
    std::printf("throughput:         %.3g vector-dims/ms\n", r.vector_dims_per_ms);
    std::printf("extrapolated:       %.1f ms for %llu vectors\n", r.extrapolated_ms,
                static_cast<unsigned long long>(SEMSKETCH_REFERENCE_COLLECTION_SIZE));
    std::printf("parallel vs serial: %s\n", parallel);
  }
  if (r.parallel_checked && !r.parallel_matches_serial) return kExitValidation;
  return kExitOk;
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> configs;
  uint64_t baseline_bits = SEMSKETCH_BASELINE_BITS;
  bool csv = false;
};

int run_report(ReportArgs& a) {
  if (a.baseline_bits == 0) invalid("--baseline-bits must be positive");
  std::vector<semsketch_config_t> rows{{32, 2, 32}, {16, 3, 32}, {8, 2, 8}};
  for (const auto& c : a.configs) rows.push_back(parse_config(c));

  struct Row {
    semsketch_config_t config;
    uint64_t bits = 0;
    double ratio = 0.0;
  };
  std::vector<Row> computed;
  for (const auto& c : rows) {
    Row r{c};
    check(semsketch_storage_report(&c, a.baseline_bits, &r.bits, &r.ratio));
    computed.push_back(r);
  }

  auto is_flagged = [](const semsketch_config_t& c) { return c.n == 8 && c.dims == 2 && c.bits == 8; };
  bool footnote = false;
  if (a.csv) {
    std::printf("n,d,bits,bits_per_vector,ratio,percent\n");
  } else {
    std::printf("baseline: %llu bits (one bit per dimension)\n", static_cast<unsigned long long>(a.baseline_bits));
    std::printf("%6s %4s %10s %16s %10s\n", "n", "d", "bits/dim", "bits/vector", "storage");
  }
  for (const auto& [c, bits, ratio] : computed) {
    if (a.csv) {
      std::printf("%u,%d,%d,%llu,%.9g,%s\n", c.n, c.dims, c.bits, static_cast<unsigned long long>(bits), ratio,
                  format_percent(ratio).c_str());
    } else {
      const bool flag = is_flagged(c) && a.baseline_bits == SEMSKETCH_BASELINE_BITS;
      footnote = footnote || flag;
      std::printf("%6u %4d %10d %16llu %10s%s\n", c.n, c.dims, c.bits, static_cast<unsigned long long>(bits),
                  format_percent(ratio).c_str(), flag ? " *" : "");
    }
  }
  if (footnote) {
    std::printf("\n* (8,2,8) is 1024 bits, 0.417%% of the baseline. The 4.2%% often quoted for this row\n"
                "  does not follow from n^2*d*b, which the other rows match.\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semsketch: semantic sketch retrieval over concept-map feature vectors"};
  app.require_subcommand(1);

  EmbedArgs embed;
  semsketch_tsne_params_default(&embed.tsne);
  auto* embed_cmd = app.add_subcommand("embed", "Build the concept embedding table with t-SNE");
  embed_cmd->add_option("--vocab", embed.vocab, "Vocabulary file (<id>\\t<label>\\t<source>)")->required();
  embed_cmd->add_option("--vectors", embed.vectors, "Word vectors in text format")->required();
  embed_cmd->add_option("--out", embed.out, "Output embedding table")->required();
  embed_cmd->add_option("--d", embed.d, "Embedding dimensions (2 or 3)")->capture_default_str();
  embed_cmd->add_option("--seed", embed.tsne.seed, "Random seed")->capture_default_str();
  embed_cmd->add_option("--perplexity", embed.tsne.perplexity, "Perplexity (capped at (m-1)/3)")->capture_default_str();
  embed_cmd->add_option("--iterations", embed.tsne.iterations, "Gradient descent iterations")->capture_default_str();
  embed_cmd->add_option("--learning-rate", embed.tsne.learning_rate, "Learning rate")->capture_default_str();

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Encode a directory of SLM1 label maps into a store");
  ingest_cmd->add_option("--maps", ingest.maps, "Directory of <segment_id>[.<source>].slm files")->required();
  ingest_cmd->add_option("--table", ingest.table, "Embedding table")->required();
  ingest_cmd->add_option("--store", ingest.store, "Store file (created if absent)")->required();
  ingest_cmd->add_option("--n", ingest.config.n, "Grid size")->capture_default_str();
  ingest_cmd->add_option("--bits", ingest.config.bits, "Bits per dimension (8, 16, 32)")->capture_default_str();
  ingest_cmd->add_option("--threads", ingest.threads, "Worker threads")->capture_default_str();

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Top-k search with a label map or JSON sketch");
  query_cmd->add_option("--store", query.store, "Store file")->required();
  query_cmd->add_option("--table", query.table, "Embedding table")->required();
  query_cmd->add_option("--map", query.maps, "SLM1 query label map(s), pooled");
  query_cmd->add_option("--sketch", query.sketch, "JSON sketch {\"n\":..,\"cells\":[..]}");
  query_cmd->add_option("--k", query.k, "Number of results")->capture_default_str();
  query_cmd->add_option("--threads", query.threads, "Scan threads")->capture_default_str();
  query_cmd->add_flag("--csv", query.csv, "CSV output");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--table", serve.table, "Embedding table")->required();
  serve_cmd->add_option("--store", serve.store, "Store file (created if absent; in memory if omitted)");
  serve_cmd->add_option("--n", serve.config.n, "Grid size for a new store")->capture_default_str();
  serve_cmd->add_option("--bits", serve.config.bits, "Bits per dimension for a new store")->capture_default_str();
  serve_cmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port (0 = any free port)")->capture_default_str();
  serve_cmd->add_option("--threads", serve.threads, "Scan threads per query")->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time exact linear-scan kNN");
  bench_cmd->add_option("--store", bench.store, "Store file (opened, or created when --generate is given)");
  bench_cmd->add_option("--generate", bench.generate, "Append this many synthetic vectors first");
  bench_cmd->add_option("--table", bench.table, "Embedding table for queries (synthetic if omitted)");
  bench_cmd->add_option("--concepts", bench.concepts, "Concepts in the synthetic table")->capture_default_str();
  bench_cmd->add_option("--queries", bench.queries, "Number of queries")->capture_default_str();
  bench_cmd->add_option("--repetitions", bench.repetitions, "Scans per query")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Scan threads")->capture_default_str();
  bench_cmd->add_option("--k", bench.k, "Results per query")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--n", bench.config.n, "Grid size for a generated store")->capture_default_str();
  bench_cmd->add_option("--d", bench.config.dims, "Dimensions for a generated store")->capture_default_str();
  bench_cmd->add_option("--bits", bench.config.bits, "Bits per dimension for a generated store")->capture_default_str();
  bench_cmd->add_flag("--csv", bench.csv, "CSV output");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Storage footprint versus the one-hot baseline");
  report_cmd->add_option("--config", report.configs, "Extra configuration n,d,b (repeatable)");
  report_cmd->add_option("--baseline-bits", report.baseline_bits, "Baseline bits per vector")->capture_default_str();
  report_cmd->add_flag("--csv", report.csv, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*embed_cmd) return run_embed(embed);
    if (*ingest_cmd) return run_ingest(ingest);
    if (*query_cmd) return run_query(query);
    if (*serve_cmd) return run_serve(serve);
    if (*bench_cmd) return run_bench(bench);
    if (*report_cmd) return run_report(report);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.exit_code;
  }
  return kExitValidation;
}
