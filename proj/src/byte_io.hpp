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

#ifndef SEMSKETCH_SRC_BYTE_IO_HPP
#define SEMSKETCH_SRC_BYTE_IO_HPP

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace semsketch::detail {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(u & 0xFF));
    u = static_cast<U>(u >> 8);
  }
}

template <typename T>
T get_le(const std::uint8_t* p) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
  return static_cast<T>(u);
}

inline void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
}

inline float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_le<std::uint32_t>(p)); }

}  // namespace semsketch::detail

#endif  // SEMSKETCH_SRC_BYTE_IO_HPP
