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

#ifndef SEMSKETCH_VECTOR_STORE_HPP
#define SEMSKETCH_VECTOR_STORE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "semsketch/encoder.hpp"

namespace semsketch {

using SegmentId = std::uint64_t;

inline constexpr std::uint16_t kStoreVersion = 1;

/// Decoded `SVS1` header.
struct StoreHeader {
  std::uint16_t version = kStoreVersion;
  EncoderConfig config;
  std::vector<float> scale;
  std::uint64_t count = 0;

  friend bool operator==(const StoreHeader&, const StoreHeader&) = default;
};

struct QueryResult {
  SegmentId segment_id = 0;
  double distance = 0.0;
  std::uint32_t rank = 0;

  friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

/// Orders by (distance, segment_id).
inline bool result_before(const QueryResult& a, const QueryResult& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.segment_id < b.segment_id);
}

enum class OpenMode { kReadOnly, kReadWrite };

/**
 * Append-only collection of quantized feature vectors with exact top-k L1
 * search by linear scan.
 *
 * File layout (little-endian): magic "SVS1", u16 version, u16 n, u8 d,
 * u8 b, d x f32 scale, u64 count, then `count` records of u64 segment id
 * followed by ceil(n*n*d*b/8) payload bytes.
 *
 * One writer and any number of readers. A query works on the record count
 * it observes when it starts; an append in flight never blocks it. A
 * read-write handle holds an exclusive advisory lock on the file.
 */
class VectorStore {
 public:
  /// Fails if `path` already exists.
  static VectorStore create(const std::filesystem::path& path, const EncoderConfig& config,
                            std::span<const float> scale);
  static VectorStore open(const std::filesystem::path& path,
                          OpenMode mode = OpenMode::kReadWrite);
  /// Opens `path` if it exists, otherwise creates it. An existing store must
  /// match `config` and `scale`.
  static VectorStore open_or_create(const std::filesystem::path& path, const EncoderConfig& config,
                                    std::span<const float> scale);
  /// Same contract without a backing file.
  static VectorStore in_memory(const EncoderConfig& config, std::span<const float> scale);

  VectorStore(VectorStore&&) noexcept;
  VectorStore& operator=(VectorStore&&) noexcept;
  ~VectorStore();

  const EncoderConfig& config() const noexcept;
  const std::vector<float>& scale() const noexcept;
  StoreHeader header() const;
  std::uint64_t count() const;
  std::size_t dimensions() const noexcept;
  std::size_t payload_bytes() const noexcept;
  bool writable() const noexcept;

  bool contains(SegmentId id) const;

  /// Quantizes and appends one record; the record is on disk (fdatasync)
  /// before this returns. Throws Error(kDuplicate) for a known id and
  /// Error(kInvalidArgument) on a shape mismatch; the store is unchanged
  /// in both cases.
  void append(SegmentId id, const SemanticFeatureVector& vector);

  /// Appends many records with a single sync. Validates every record before
  /// writing any.
  void append_batch(std::span<const std::pair<SegmentId, SemanticFeatureVector>> records);

  SegmentId segment_id(std::size_t index) const;
  QuantizedVector record(std::size_t index) const;
  /// Dequantized record, i.e. the values distances are computed on.
  SemanticFeatureVector vector(std::size_t index) const;

  /// Exact top-k by (distance, segment_id). `threads` > 1 splits the record
  /// range; the result does not depend on it.
  std::vector<QueryResult> knn(std::span<const float> query, std::size_t k,
                               std::size_t threads = 1) const;
  std::vector<QueryResult> knn(const SemanticFeatureVector& query, std::size_t k,
                               std::size_t threads = 1) const;

  /// Distance from `query` to record `index`, using the scan kernel.
  double distance_to(std::span<const float> query, std::size_t index) const;

  struct Impl;

 private:
  explicit VectorStore(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

std::vector<std::uint8_t> encode_store_header(const StoreHeader& header);
/// Throws Error(kFormat) on bad magic, unsupported version or a short buffer.
StoreHeader decode_store_header(std::span<const std::uint8_t> bytes);
std::size_t store_header_size(int dims);

}  // namespace semsketch

#endif  // SEMSKETCH_VECTOR_STORE_HPP
