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

#ifndef SEMSKETCH_LABEL_MAP_HPP
#define SEMSKETCH_LABEL_MAP_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "semsketch/vocabulary.hpp"

namespace semsketch {

/// Pixel-wise concept assignment, row-major.
struct LabelMap {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::string source;
  std::vector<std::uint16_t> cells;

  std::uint16_t at(std::uint32_t row, std::uint32_t col) const {
    return cells[static_cast<std::size_t>(row) * width + col];
  }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

/// n x n majority-vote aggregation of one or more label maps, row-major.
struct GridMap {
  std::uint32_t n = 0;
  std::vector<ConceptId> cells;

  friend bool operator==(const GridMap&, const GridMap&) = default;
};

/// Decodes the `SLM1` format: magic, u32 width, u32 height, u8 tag length,
/// tag bytes, then width*height u16 ids, all little-endian. If
/// `vocabulary_size` is non-zero every id must be below it. Trailing bytes
/// are rejected so that encoding a parsed map reproduces the input exactly.
LabelMap parse_label_map(std::span<const std::uint8_t> bytes, std::size_t vocabulary_size = 0);
std::vector<std::uint8_t> write_label_map(const LabelMap& map);

LabelMap read_label_map_file(const std::filesystem::path& path, std::size_t vocabulary_size = 0);
void write_label_map_file(const LabelMap& map, const std::filesystem::path& path);

/// Cell (r, c) pools, over every input map, the pixels with row in
/// [floor(r*H/n), floor((r+1)*H/n)) and column in [floor(c*W/n),
/// floor((c+1)*W/n)) using that map's own H and W. The cell takes the most
/// frequent id; ties go to the smallest id.
///
/// Requires a non-empty list and 1 <= n <= min(width, height) of every map.
GridMap aggregate(std::span<const LabelMap> maps, std::uint32_t n);

}  // namespace semsketch

#endif  // SEMSKETCH_LABEL_MAP_HPP
