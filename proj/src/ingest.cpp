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

#include "semsketch/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <thread>

#include "semsketch/error.hpp"
#include "text_util.hpp"

namespace semsketch {

namespace fs = std::filesystem;

SemanticFeatureVector encode_label_maps(std::span<const LabelMap> maps, std::uint32_t n,
                                        const EmbeddingTable& table) {
  return encode_grid(aggregate(maps, n), table);
}

std::optional<SegmentId> parse_segment_filename(std::string_view name) {
  constexpr std::string_view kExt = ".slm";
  if (name.size() <= kExt.size() || !name.ends_with(kExt)) return std::nullopt;
  name.remove_suffix(kExt.size());
  const auto dot = name.find('.');
  const auto id_part = name.substr(0, dot);
  if (id_part.empty() || !std::ranges::all_of(id_part, [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  if (dot != std::string_view::npos) {
    const auto source = name.substr(dot + 1);
    if (source.empty() || source.find('.') != std::string_view::npos) return std::nullopt;
  }
  return detail::parse_number<SegmentId>(id_part);
}

namespace {

struct Segment {
  SegmentId id = 0;
  std::vector<fs::path> files;
  std::optional<SemanticFeatureVector> vector;
  std::vector<IngestDiagnostic> diagnostics;
};

void prepare(Segment& seg, const EmbeddingTable& table, std::uint32_t n) {
  std::vector<LabelMap> maps;
  for (const auto& file : seg.files) {
    try {
      maps.push_back(read_label_map_file(file, table.size()));
    } catch (const Error& e) {
      seg.diagnostics.push_back({file.string(), "segment " + std::to_string(seg.id) + " skipped: " + e.what()});
      return;
    }
  }
  try {
    seg.vector = encode_label_maps(maps, n, table);
  } catch (const Error& e) {
    seg.diagnostics.push_back({seg.files.front().string(),
                               "segment " + std::to_string(seg.id) + " skipped: " + e.what()});
  }
}

}  // namespace

IngestSummary ingest_directory(const fs::path& dir, const EmbeddingTable& table, VectorStore& store,
                               std::size_t threads) {
  if (!fs::is_directory(dir)) fail(ErrorCode::kIo, "not a directory: " + dir.string());
  if (table.dims() != store.config().dims) {
    fail(ErrorCode::kInvalidArgument, "embedding table and store disagree on d");
  }

  IngestSummary summary;
  std::map<SegmentId, Segment> grouped;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".slm") continue;
    ++summary.files;
    const auto name = entry.path().filename().string();
    const auto id = parse_segment_filename(name);
    if (!id) {
      summary.diagnostics.push_back({entry.path().string(), "file name is not <segment_id>[.<source>].slm"});
      continue;
    }
    auto& seg = grouped[*id];
    seg.id = *id;
    seg.files.push_back(entry.path());
  }

  std::vector<Segment*> segments;
  for (auto& [id, seg] : grouped) {
    std::ranges::sort(seg.files);
    segments.push_back(&seg);
  }
  summary.segments = segments.size();

  const auto n = store.config().n;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (auto i = next++; i < segments.size(); i = next++) prepare(*segments[i], table, n);
  };
  const auto workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(segments.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  for (auto* seg : segments) {
    summary.diagnostics.insert(summary.diagnostics.end(), seg->diagnostics.begin(), seg->diagnostics.end());
    if (!seg->vector) continue;
    try {
      store.append(seg->id, *seg->vector);
      ++summary.ingested;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDuplicate) throw;
      summary.diagnostics.push_back({seg->files.front().string(), e.what()});
    }
  }
  return summary;
}

}  // namespace semsketch
