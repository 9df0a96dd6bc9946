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

#include "semsketch/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "semsketch/error.hpp"

namespace semsketch {

namespace {

double percentile(std::vector<double> sorted_values, double q) {
  // Nearest-rank on an already sorted list.
  const auto n = sorted_values.size();
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  return sorted_values[std::clamp<std::size_t>(rank, 1, n) - 1];
}

}  // namespace

std::string machine_descriptor() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  std::string line;
  while (std::getline(info, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(line.find_first_not_of(' ', colon + 1));
      break;
    }
  }
  std::string compiler =
#if defined(__clang__)
      "clang " __clang_version__;
#elif defined(__GNUC__)
      "gcc " __VERSION__;
#else
      "unknown compiler";
#endif
  return cpu + "; " + std::to_string(std::thread::hardware_concurrency()) + " logical cores; " + compiler;
}

BenchReport scan_benchmark(const VectorStore& store, std::span<const SemanticFeatureVector> queries,
                           std::size_t repetitions, std::size_t threads, std::size_t k) {
  if (queries.empty()) fail(ErrorCode::kInvalidArgument, "benchmark needs at least one query");
  if (repetitions == 0) fail(ErrorCode::kInvalidArgument, "repetitions must be positive");
  const auto count = store.count();
  if (count == 0) fail(ErrorCode::kInvalidArgument, "cannot benchmark an empty store");

  BenchReport report;
  report.vectors = count;
  report.dimensions = store.dimensions();
  report.queries = queries.size();
  report.repetitions = repetitions;
  report.threads = std::max<std::size_t>(threads, 1);
  report.k = k;
  report.machine = machine_descriptor();

  std::vector<double> per_query_ms;
  per_query_ms.reserve(queries.size() * repetitions);
  for (const auto& q : queries) {
    std::vector<QueryResult> last;
    for (std::size_t r = 0; r < repetitions; ++r) {
      const auto start = std::chrono::steady_clock::now();
      last = store.knn(q, k, report.threads);
      const auto stop = std::chrono::steady_clock::now();
      per_query_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    if (report.threads > 1) {
      report.parallel_checked = true;
      if (store.knn(q, k, 1) != last) report.parallel_matches_serial = false;
    }
  }

  report.mean_ms = std::accumulate(per_query_ms.begin(), per_query_ms.end(), 0.0) /
                   static_cast<double>(per_query_ms.size());
  std::sort(per_query_ms.begin(), per_query_ms.end());
  report.p50_ms = percentile(per_query_ms, 0.50);
  report.p95_ms = percentile(per_query_ms, 0.95);
  report.vector_dims_per_ms =
      static_cast<double>(count) * static_cast<double>(report.dimensions) / report.mean_ms;
  report.extrapolated_ms =
      report.mean_ms * static_cast<double>(kReferenceCollectionSize) / static_cast<double>(count);
  return report;
}

EmbeddingTable synthetic_embedding_table(std::size_t concepts, int dims, std::uint64_t seed) {
  if (concepts < 1) fail(ErrorCode::kInvalidArgument, "need at least one concept");
  if (dims < 1) fail(ErrorCode::kInvalidArgument, "need at least one dimension");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> coord(-1.0f, 1.0f);
  std::vector<std::string> labels{"background"};
  for (std::size_t i = 1; i < concepts; ++i) labels.push_back("concept" + std::to_string(i));
  std::vector<float> coords(concepts * static_cast<std::size_t>(dims));
  for (auto& v : coords) v = coord(rng);
  return EmbeddingTable(std::move(labels), dims, std::vector<float>(static_cast<std::size_t>(dims), 1.0f),
                        std::move(coords));
}

GridMap random_grid(std::uint32_t n, std::size_t concepts, std::mt19937_64& rng) {
  std::uniform_int_distribution<ConceptId> pick(0, static_cast<ConceptId>(concepts - 1));
  GridMap grid{n, std::vector<ConceptId>(static_cast<std::size_t>(n) * n)};
  for (auto& c : grid.cells) c = pick(rng);
  return grid;
}

std::vector<SemanticFeatureVector> synthetic_queries(const EmbeddingTable& table, std::uint32_t n,
                                                     std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SemanticFeatureVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(encode_grid(random_grid(n, table.size(), rng), table));
  return out;
}

void fill_synthetic(VectorStore& store, const EmbeddingTable& table, std::size_t count, std::uint64_t seed,
                    SegmentId first_id) {
  if (table.dims() != store.config().dims) {
    fail(ErrorCode::kInvalidArgument, "embedding table and store disagree on d");
  }
  constexpr std::size_t kBatch = 1024;
  std::mt19937_64 rng(seed);
  std::vector<std::pair<SegmentId, SemanticFeatureVector>> batch;
  batch.reserve(kBatch);
  for (std::size_t i = 0; i < count; ++i) {
    batch.emplace_back(first_id + i, encode_grid(random_grid(store.config().n, table.size(), rng), table));
    if (batch.size() == kBatch || i + 1 == count) {
      store.append_batch(batch);
      batch.clear();
    }
  }
}

}  // namespace semsketch
