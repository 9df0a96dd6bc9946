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

#ifndef SEMSKETCH_INGEST_HPP
#define SEMSKETCH_INGEST_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsketch/embedding_table.hpp"
#include "semsketch/encoder.hpp"
#include "semsketch/label_map.hpp"
#include "semsketch/vector_store.hpp"

namespace semsketch {

/// aggregate() followed by encode_grid().
SemanticFeatureVector encode_label_maps(std::span<const LabelMap> maps, std::uint32_t n,
                                        const EmbeddingTable& table);

/// "<segment_id>[.<source>].slm" -> segment id. nullopt for any other name.
std::optional<SegmentId> parse_segment_filename(std::string_view filename);

struct IngestDiagnostic {
  std::string file;
  std::string message;
};

struct IngestSummary {
  std::size_t files = 0;
  std::size_t segments = 0;
  std::size_t ingested = 0;
  std::vector<IngestDiagnostic> diagnostics;
};

/// Ingests every `*.slm` file in `dir`. Files sharing a segment id are
/// pooled into one aggregate. A segment with any unreadable file, an id
/// already in the store or maps smaller than n is skipped with a
/// diagnostic; store-level failures propagate. Segments are appended in
/// ascending id order regardless of `threads`.
IngestSummary ingest_directory(const std::filesystem::path& dir, const EmbeddingTable& table,
                               VectorStore& store, std::size_t threads = 1);

}  // namespace semsketch

#endif  // SEMSKETCH_INGEST_HPP
