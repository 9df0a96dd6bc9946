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

#ifndef SEMSKETCH_BENCH_HPP
#define SEMSKETCH_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "semsketch/embedding_table.hpp"
#include "semsketch/encoder.hpp"
#include "semsketch/vector_store.hpp"

namespace semsketch {

/// Reference collection size for extrapolated scan times.
inline constexpr std::uint64_t kReferenceCollectionSize = 1046235;

struct BenchReport {
  std::uint64_t vectors = 0;
  std::size_t dimensions = 0;
  std::size_t queries = 0;
  std::size_t repetitions = 0;
  std::size_t threads = 1;
  std::size_t k = 10;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double vector_dims_per_ms = 0.0;
  /// mean_ms * kReferenceCollectionSize / vectors
  double extrapolated_ms = 0.0;
  /// Set when threads > 1: every query was also answered single-threaded
  /// and the result lists compared.
  bool parallel_checked = false;
  bool parallel_matches_serial = true;
  std::string machine;
};

/// Times `repetitions` full scans for every query. Throws on an empty store,
/// an empty query list or zero repetitions.
BenchReport scan_benchmark(const VectorStore& store,
                           std::span<const SemanticFeatureVector> queries,
                           std::size_t repetitions, std::size_t threads = 1,
                           std::size_t k = 10);

/// CPU model, logical core count and compiler.
std::string machine_descriptor();

/// Random concept coordinates uniform in [-1, 1], concept 0 labelled
/// "background", the others "concept<i>".
EmbeddingTable synthetic_embedding_table(std::size_t concepts, int dims, std::uint64_t seed);

GridMap random_grid(std::uint32_t n, std::size_t concepts, std::mt19937_64& rng);

std::vector<SemanticFeatureVector> synthetic_queries(const EmbeddingTable& table,
                                                     std::uint32_t n, std::size_t count,
                                                     std::uint64_t seed);

/// Appends `count` vectors of random grids encoded with `table`, ids
/// first_id, first_id + 1, ...
void fill_synthetic(VectorStore& store, const EmbeddingTable& table, std::size_t count,
                    std::uint64_t seed, SegmentId first_id = 0);

}  // namespace semsketch

#endif  // SEMSKETCH_BENCH_HPP
