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

#include "semsketch/encoder.hpp"

#include <bit>
#include <algorithm>
#include <cmath>

#include "scan_kernel.hpp"
#include "semsketch/error.hpp"

namespace semsketch {

namespace {

constexpr double kRangeTolerance = 1e-9;

double max_code(int bits) { return std::ldexp(1.0, bits) - 1.0; }

void require_bits(int bits) {
  if (bits != 8 && bits != 16 && bits != 32) {
    fail(ErrorCode::kInvalidArgument, "bits per dimension must be 8, 16 or 32");
  }
}

}  // namespace

void validate(const EncoderConfig& config) {
  if (config.n < 1 || config.n > 0xFFFF) fail(ErrorCode::kInvalidArgument, "n must lie in [1, 65535]");
  if (config.dims != 2 && config.dims != 3) fail(ErrorCode::kInvalidArgument, "d must be 2 or 3");
  require_bits(config.bits);
}

SemanticFeatureVector encode_grid(const GridMap& grid, const EmbeddingTable& table) {
  const auto cells = static_cast<std::size_t>(grid.n) * grid.n;
  if (grid.cells.size() != cells) fail(ErrorCode::kInvalidArgument, "grid must have n*n cells");
  const auto d = static_cast<std::size_t>(table.dims());
  SemanticFeatureVector out{grid.n, table.dims(), std::vector<float>(cells * d)};
  for (std::size_t i = 0; i < cells; ++i) {
    const auto id = grid.cells[i];
    if (!table.contains(id)) {
      fail(ErrorCode::kInvalidArgument, "cell " + std::to_string(i) + " has unknown concept id " +
                                            std::to_string(id));
    }
    const auto coords = table[id];
    std::copy(coords.begin(), coords.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  return out;
}

BaselineBinaryVector encode_baseline(const GridMap& grid, std::size_t concepts) {
  const auto cells = static_cast<std::size_t>(grid.n) * grid.n;
  if (grid.cells.size() != cells) fail(ErrorCode::kInvalidArgument, "grid must have n*n cells");
  BaselineBinaryVector out{grid.n, concepts, std::vector<bool>(cells * concepts, false)};
  for (std::size_t i = 0; i < cells; ++i) {
    if (grid.cells[i] >= concepts) {
      fail(ErrorCode::kInvalidArgument, "cell " + std::to_string(i) + " has id " +
                                            std::to_string(grid.cells[i]) + " >= m");
    }
    out.bits[i * concepts + grid.cells[i]] = true;
  }
  return out;
}

std::uint32_t quantize_value(double x, int bits) {
  require_bits(bits);
  if (!std::isfinite(x) || x < -1.0 - kRangeTolerance || x > 1.0 + kRangeTolerance) {
    fail(ErrorCode::kInvalidArgument, "value " + std::to_string(x) + " outside [-1, 1]");
  }
  x = std::clamp(x, -1.0, 1.0);
  if (bits == 32) return std::bit_cast<std::uint32_t>(static_cast<float>(x));
  return static_cast<std::uint32_t>(std::lround((x + 1.0) / 2.0 * max_code(bits)));
}

float dequantize_value(std::uint32_t code, int bits) {
  require_bits(bits);
  if (bits == 32) return std::bit_cast<float>(code);
  return static_cast<float>(2.0 * code / max_code(bits) - 1.0);
}

QuantizedVector quantize(const SemanticFeatureVector& v, int bits) {
  require_bits(bits);
  QuantizedVector out{v.n, v.dims, bits, std::vector<std::uint32_t>(v.values.size())};
  for (std::size_t i = 0; i < v.values.size(); ++i) out.codes[i] = quantize_value(v.values[i], bits);
  return out;
}

SemanticFeatureVector dequantize(const QuantizedVector& q) {
  require_bits(q.bits);
  SemanticFeatureVector out{q.n, q.dims, std::vector<float>(q.codes.size())};
  const auto limit = q.bits == 32 ? 0.0 : max_code(q.bits);
  for (std::size_t i = 0; i < q.codes.size(); ++i) {
    if (q.bits != 32 && q.codes[i] > limit) fail(ErrorCode::kInvalidArgument, "code exceeds 2^b - 1");
    out.values[i] = dequantize_value(q.codes[i], q.bits);
  }
  return out;
}

double l1_distance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::kInvalidArgument, "length mismatch: " + std::to_string(a.size()) + " vs " +
                                          std::to_string(b.size()));
  }
  return detail::l1_f32(a.data(), b.data(), a.size());
}

StorageReport storage_report(const EncoderConfig& config, std::uint64_t baseline_bits) {
  validate(config);
  if (baseline_bits == 0) fail(ErrorCode::kInvalidArgument, "baseline bit count must be positive");
  const auto bits = static_cast<std::uint64_t>(config.n) * config.n *
                    static_cast<std::uint64_t>(config.dims) * static_cast<std::uint64_t>(config.bits);
  return {config, bits, static_cast<double>(bits) / static_cast<double>(baseline_bits)};
}

}  // namespace semsketch
