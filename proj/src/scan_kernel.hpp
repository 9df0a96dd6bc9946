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

#ifndef SEMSKETCH_SRC_SCAN_KERNEL_HPP
#define SEMSKETCH_SRC_SCAN_KERNEL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace semsketch::detail {

// Eight independent double accumulators so the loop vectorizes without
// -ffast-math. The summation order only depends on the length, so equal
// inputs always give bit-equal distances.
inline double l1_f32(const float* a, const float* b, std::size_t len) {
  double acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    for (std::size_t l = 0; l < 8; ++l) {
      acc[l] += std::abs(static_cast<double>(a[i + l]) - static_cast<double>(b[i + l]));
    }
  }
  double tail = 0.0;
  for (; i < len; ++i) tail += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

// Same accumulation order, record values looked up through `table`.
template <typename Code>
double l1_coded(const float* query, const Code* codes, const float* table, std::size_t len) {
  double acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    for (std::size_t l = 0; l < 8; ++l) {
      acc[l] += std::abs(static_cast<double>(query[i + l]) - static_cast<double>(table[codes[i + l]]));
    }
  }
  double tail = 0.0;
  for (; i < len; ++i) tail += std::abs(static_cast<double>(query[i]) - static_cast<double>(table[codes[i]]));
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

}  // namespace semsketch::detail

#endif  // SEMSKETCH_SRC_SCAN_KERNEL_HPP
