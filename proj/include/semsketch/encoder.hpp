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

#ifndef SEMSKETCH_ENCODER_HPP
#define SEMSKETCH_ENCODER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "semsketch/embedding_table.hpp"
#include "semsketch/label_map.hpp"

namespace semsketch {

/// n*n*d values; the slice [i*d, (i+1)*d) holds the coordinates of the
/// concept in grid cell i (row-major).
struct SemanticFeatureVector {
  std::uint32_t n = 0;
  int dims = 0;
  std::vector<float> values;

  friend bool operator==(const SemanticFeatureVector&, const SemanticFeatureVector&) = default;
};

/// One-hot baseline: n*n blocks of m bits, exactly one bit set per block.
struct BaselineBinaryVector {
  std::uint32_t n = 0;
  std::size_t concepts = 0;
  std::vector<bool> bits;
};

/// Codes of `bits` bits each. For 32 bits a code is the raw IEEE-754 pattern
/// of the float value.
struct QuantizedVector {
  std::uint32_t n = 0;
  int dims = 0;
  int bits = 0;
  std::vector<std::uint32_t> codes;

  friend bool operator==(const QuantizedVector&, const QuantizedVector&) = default;
};

struct EncoderConfig {
  std::uint32_t n = 32;
  int dims = 2;
  int bits = 32;
  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

void validate(const EncoderConfig& config);

inline constexpr std::uint64_t kBaselineBits = 245760;

SemanticFeatureVector encode_grid(const GridMap& grid, const EmbeddingTable& table);
BaselineBinaryVector encode_baseline(const GridMap& grid, std::size_t concepts);

QuantizedVector quantize(const SemanticFeatureVector& vector, int bits);
SemanticFeatureVector dequantize(const QuantizedVector& vector);

std::uint32_t quantize_value(double x, int bits);
float dequantize_value(std::uint32_t code, int bits);

/// Sum of |a_i - b_i|, accumulated in double. Throws on length mismatch.
double l1_distance(std::span<const float> a, std::span<const float> b);

struct StorageReport {
  EncoderConfig config;
  std::uint64_t bits_per_vector = 0;
  double ratio = 0.0;
};

/// bits = n^2 * d * b, ratio = bits / baseline_bits.
StorageReport storage_report(const EncoderConfig& config,
                             std::uint64_t baseline_bits = kBaselineBits);

}  // namespace semsketch

#endif  // SEMSKETCH_ENCODER_HPP
