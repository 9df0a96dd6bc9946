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

#include "semsketch/label_map.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "byte_io.hpp"
#include "semsketch/error.hpp"

namespace semsketch {

namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'L', 'M', '1'};
constexpr std::size_t kFixedHeader = 4 + 4 + 4 + 1;

}  // namespace

LabelMap parse_label_map(std::span<const std::uint8_t> bytes, std::size_t vocabulary_size) {
  if (bytes.size() < kFixedHeader) fail(ErrorCode::kFormat, "label map truncated: short header");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    fail(ErrorCode::kFormat, "label map has bad magic");
  }
  LabelMap map;
  map.width = detail::get_le<std::uint32_t>(bytes.data() + 4);
  map.height = detail::get_le<std::uint32_t>(bytes.data() + 8);
  const std::size_t tag_len = bytes[12];
  if (map.width == 0 || map.height == 0) fail(ErrorCode::kFormat, "label map has zero width or height");
  if (bytes.size() < kFixedHeader + tag_len) fail(ErrorCode::kFormat, "label map truncated: source tag");
  map.source.assign(reinterpret_cast<const char*>(bytes.data() + kFixedHeader), tag_len);

  const auto pixels = static_cast<std::uint64_t>(map.width) * map.height;
  const auto payload = bytes.subspan(kFixedHeader + tag_len);
  if (payload.size() < pixels * 2) {
    fail(ErrorCode::kFormat, "label map truncated: expected " + std::to_string(pixels * 2) +
                                 " payload bytes, got " + std::to_string(payload.size()));
  }
  if (payload.size() > pixels * 2) fail(ErrorCode::kFormat, "label map has trailing bytes");

  map.cells.resize(pixels);
  for (std::size_t i = 0; i < pixels; ++i) {
    const auto id = detail::get_le<std::uint16_t>(payload.data() + 2 * i);
    if (vocabulary_size != 0 && id >= vocabulary_size) {
      fail(ErrorCode::kFormat, "label map pixel " + std::to_string(i) + " has unknown concept id " +
                                   std::to_string(id));
    }
    map.cells[i] = id;
  }
  return map;
}

std::vector<std::uint8_t> write_label_map(const LabelMap& map) {
  if (map.width == 0 || map.height == 0) fail(ErrorCode::kInvalidArgument, "label map has zero extent");
  if (map.cells.size() != static_cast<std::size_t>(map.width) * map.height) {
    fail(ErrorCode::kInvalidArgument, "label map cell count does not match width*height");
  }
  if (map.source.size() > 255) fail(ErrorCode::kInvalidArgument, "source tag longer than 255 bytes");
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(kFixedHeader + map.source.size() + map.cells.size() * 2);
  detail::put_le<std::uint32_t>(out, map.width);
  detail::put_le<std::uint32_t>(out, map.height);
  out.push_back(static_cast<std::uint8_t>(map.source.size()));
  out.insert(out.end(), map.source.begin(), map.source.end());
  for (auto id : map.cells) detail::put_le<std::uint16_t>(out, id);
  return out;
}

LabelMap read_label_map_file(const std::filesystem::path& path, std::size_t vocabulary_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open label map " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), {}};
  return parse_label_map(bytes, vocabulary_size);
}

void write_label_map_file(const LabelMap& map, const std::filesystem::path& path) {
  const auto bytes = write_label_map(map);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "cannot write label map " + path.string());
}

GridMap aggregate(std::span<const LabelMap> maps, std::uint32_t n) {
  if (maps.empty()) fail(ErrorCode::kInvalidArgument, "aggregate needs at least one label map");
  if (n == 0) fail(ErrorCode::kInvalidArgument, "grid size must be positive");
  std::size_t max_id = 0;
  for (const auto& map : maps) {
    if (map.cells.size() != static_cast<std::size_t>(map.width) * map.height) {
      fail(ErrorCode::kInvalidArgument, "label map cell count does not match width*height");
    }
    if (n > std::min(map.width, map.height)) {
      fail(ErrorCode::kInvalidArgument, "grid size " + std::to_string(n) + " exceeds label map extent " +
                                            std::to_string(map.width) + "x" + std::to_string(map.height));
    }
    if (!map.cells.empty()) max_id = std::max<std::size_t>(max_id, *std::ranges::max_element(map.cells));
  }

  const std::size_t bins = max_id + 1;
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  std::vector<std::uint32_t> counts(cells * bins, 0);

  std::vector<std::uint32_t> col_cell;
  for (const auto& map : maps) {
    // Pixel x belongs to column cell c with floor(c*W/n) <= x < floor((c+1)*W/n).
    col_cell.assign(map.width, 0);
    for (std::uint32_t c = 0; c < n; ++c) {
      const auto lo = static_cast<std::uint64_t>(c) * map.width / n;
      const auto hi = static_cast<std::uint64_t>(c + 1) * map.width / n;
      for (auto x = lo; x < hi; ++x) col_cell[x] = c;
    }
    for (std::uint32_t r = 0; r < n; ++r) {
      const auto y_lo = static_cast<std::uint64_t>(r) * map.height / n;
      const auto y_hi = static_cast<std::uint64_t>(r + 1) * map.height / n;
      for (auto y = y_lo; y < y_hi; ++y) {
        const auto* row = map.cells.data() + y * map.width;
        auto* row_counts = counts.data() + static_cast<std::size_t>(r) * n * bins;
        for (std::uint32_t x = 0; x < map.width; ++x) ++row_counts[col_cell[x] * bins + row[x]];
      }
    }
  }

  GridMap grid{n, std::vector<ConceptId>(cells)};
  for (std::size_t i = 0; i < cells; ++i) {
    const auto* hist = counts.data() + i * bins;
    std::size_t best = 0;
    for (std::size_t id = 1; id < bins; ++id) {
      if (hist[id] > hist[best]) best = id;
    }
    grid.cells[i] = static_cast<ConceptId>(best);
  }
  return grid;
}

}  // namespace semsketch
