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

#include "semsketch/vector_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <mutex>
#include <shared_mutex>
#include <thread>
#include <unordered_set>

#include "byte_io.hpp"
#include "scan_kernel.hpp"
#include "semsketch/error.hpp"

namespace semsketch {

namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'V', 'S', '1'};
constexpr std::size_t kChunkBytes = std::size_t{4} << 20;

[[noreturn]] void fail_errno(const std::string& what) {
  fail(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::uint8_t* data, std::size_t size, std::uint64_t offset) {
  while (size > 0) {
    const auto n = ::pwrite(fd, data, size, static_cast<off_t>(offset));
    if (n < 0) {
      if (errno == EINTR) continue;
      fail_errno("store write failed");
    }
    data += n;
    size -= static_cast<std::size_t>(n);
    offset += static_cast<std::uint64_t>(n);
  }
}

void read_all(int fd, std::uint8_t* data, std::size_t size, std::uint64_t offset) {
  while (size > 0) {
    const auto n = ::pread(fd, data, size, static_cast<off_t>(offset));
    if (n < 0) {
      if (errno == EINTR) continue;
      fail_errno("store read failed");
    }
    if (n == 0) fail(ErrorCode::kFormat, "store truncated");
    data += n;
    size -= static_cast<std::size_t>(n);
    offset += static_cast<std::uint64_t>(n);
  }
}

void sync_fd(int fd) {
  if (::fdatasync(fd) != 0) fail_errno("store sync failed");
}

void validate_scale(std::span<const float> scale, int dims) {
  if (scale.size() != static_cast<std::size_t>(dims)) {
    fail(ErrorCode::kInvalidArgument, "store scale vector must have d entries");
  }
  for (float s : scale) {
    if (!std::isfinite(s) || !(s > 0.0f)) fail(ErrorCode::kInvalidArgument, "store scale must be positive");
  }
}

struct Chunk {
  std::vector<SegmentId> ids;
  std::vector<float> f32;
  std::vector<std::uint16_t> u16;
  std::vector<std::uint8_t> u8;
};

struct Snapshot {
  std::vector<std::shared_ptr<const Chunk>> chunks;
  std::uint64_t count = 0;
};

bool heap_less(const QueryResult& a, const QueryResult& b) { return result_before(a, b); }

}  // namespace

struct VectorStore::Impl {
  StoreHeader header;  // header.count is unused; see count
  std::size_t dims = 0;
  std::size_t payload_bytes = 0;
  std::size_t record_bytes = 0;
  std::size_t header_bytes = 0;
  std::size_t chunk_records = 0;
  std::vector<float> lut;  // code -> value for 8/16-bit stores

  int fd = -1;
  bool writable = true;

  std::mutex write_mutex;
  mutable std::shared_mutex publish_mutex;
  std::vector<std::shared_ptr<Chunk>> chunks;
  std::uint64_t count = 0;
  std::unordered_set<SegmentId> ids;

  Impl(const EncoderConfig& config, std::span<const float> scale) {
    validate(config);
    validate_scale(scale, config.dims);
    header.config = config;
    header.scale.assign(scale.begin(), scale.end());
    dims = static_cast<std::size_t>(config.n) * config.n * static_cast<std::size_t>(config.dims);
    payload_bytes = (dims * static_cast<std::size_t>(config.bits) + 7) / 8;
    record_bytes = 8 + payload_bytes;
    header_bytes = store_header_size(config.dims);
    chunk_records = std::max<std::size_t>(64, kChunkBytes / std::max<std::size_t>(payload_bytes, 1));
    if (config.bits != 32) {
      lut.resize(std::size_t{1} << config.bits);
      for (std::size_t c = 0; c < lut.size(); ++c) {
        lut[c] = dequantize_value(static_cast<std::uint32_t>(c), config.bits);
      }
    }
  }

  ~Impl() {
    if (fd >= 0) ::close(fd);
  }

  std::shared_ptr<Chunk> new_chunk() const {
    auto c = std::make_shared<Chunk>();
    c->ids.resize(chunk_records);
    switch (header.config.bits) {
      case 32: c->f32.resize(chunk_records * dims); break;
      case 16: c->u16.resize(chunk_records * dims); break;
      default: c->u8.resize(chunk_records * dims); break;
    }
    return c;
  }

  Snapshot snapshot() const {
    std::shared_lock lock(publish_mutex);
    return {{chunks.begin(), chunks.end()}, count};
  }

  // Stores codes into slot `index` of `chunk`.
  void place(Chunk& chunk, std::size_t slot, SegmentId id, const QuantizedVector& q) const {
    chunk.ids[slot] = id;
    const auto base = slot * dims;
    for (std::size_t i = 0; i < dims; ++i) {
      const auto code = q.codes[i];
      switch (header.config.bits) {
        case 32: chunk.f32[base + i] = std::bit_cast<float>(code); break;
        case 16: chunk.u16[base + i] = static_cast<std::uint16_t>(code); break;
        default: chunk.u8[base + i] = static_cast<std::uint8_t>(code); break;
      }
    }
  }

  // Decodes one on-disk payload into slot `slot`.
  void place_bytes(Chunk& chunk, std::size_t slot, const std::uint8_t* record) const {
    chunk.ids[slot] = detail::get_le<std::uint64_t>(record);
    const auto* p = record + 8;
    const auto base = slot * dims;
    switch (header.config.bits) {
      case 32:
        for (std::size_t i = 0; i < dims; ++i) chunk.f32[base + i] = detail::get_f32(p + 4 * i);
        break;
      case 16:
        for (std::size_t i = 0; i < dims; ++i) chunk.u16[base + i] = detail::get_le<std::uint16_t>(p + 2 * i);
        break;
      default:
        std::memcpy(chunk.u8.data() + base, p, dims);
        break;
    }
  }

  void encode_record(std::vector<std::uint8_t>& out, SegmentId id, const QuantizedVector& q) const {
    detail::put_le<std::uint64_t>(out, id);
    for (auto code : q.codes) {
      switch (header.config.bits) {
        case 32: detail::put_le<std::uint32_t>(out, code); break;
        case 16: detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(code)); break;
        default: out.push_back(static_cast<std::uint8_t>(code)); break;
      }
    }
  }

  double distance(const float* query, const Chunk& chunk, std::size_t slot) const {
    const auto base = slot * dims;
    switch (header.config.bits) {
      case 32: return detail::l1_f32(query, chunk.f32.data() + base, dims);
      case 16: return detail::l1_coded(query, chunk.u16.data() + base, lut.data(), dims);
      default: return detail::l1_coded(query, chunk.u8.data() + base, lut.data(), dims);
    }
  }

  QuantizedVector check_and_quantize(const SemanticFeatureVector& v) const {
    const auto& cfg = header.config;
    if (v.n != cfg.n || v.dims != cfg.dims || v.values.size() != dims) {
      fail(ErrorCode::kInvalidArgument,
           "vector shape (n=" + std::to_string(v.n) + ", d=" + std::to_string(v.dims) +
               ") does not match store (n=" + std::to_string(cfg.n) + ", d=" + std::to_string(cfg.dims) + ")");
    }
    return quantize(v, cfg.bits);
  }

  void write_count(std::uint64_t value) {
    std::vector<std::uint8_t> bytes;
    detail::put_le<std::uint64_t>(bytes, value);
    write_all(fd, bytes.data(), bytes.size(), header_bytes - 8);
  }

  // Caller holds write_mutex. Records are already validated.
  void commit(std::span<const std::pair<SegmentId, QuantizedVector>> records) {
    if (fd >= 0) {
      std::vector<std::uint8_t> bytes;
      bytes.reserve(records.size() * record_bytes);
      for (const auto& [id, q] : records) encode_record(bytes, id, q);
      write_all(fd, bytes.data(), bytes.size(), header_bytes + count * record_bytes);
      write_count(count + records.size());
      sync_fd(fd);
    }

    auto local_chunks = chunks;  // only the writer mutates the chunk list
    std::uint64_t next = count;
    for (const auto& [id, q] : records) {
      const auto slot = static_cast<std::size_t>(next % chunk_records);
      if (slot == 0) local_chunks.push_back(new_chunk());
      place(*local_chunks.back(), slot, id, q);
      ++next;
    }

    std::unique_lock lock(publish_mutex);
    chunks = std::move(local_chunks);
    count = next;
    for (const auto& r : records) ids.insert(r.first);
  }
};

std::size_t store_header_size(int dims) { return 4 + 2 + 2 + 1 + 1 + 4 * static_cast<std::size_t>(dims) + 8; }

std::vector<std::uint8_t> encode_store_header(const StoreHeader& h) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  detail::put_le<std::uint16_t>(out, h.version);
  detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(h.config.n));
  out.push_back(static_cast<std::uint8_t>(h.config.dims));
  out.push_back(static_cast<std::uint8_t>(h.config.bits));
  for (float s : h.scale) detail::put_f32(out, s);
  detail::put_le<std::uint64_t>(out, h.count);
  return out;
}

StoreHeader decode_store_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 10) fail(ErrorCode::kFormat, "store truncated: short header");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    fail(ErrorCode::kFormat, "store has bad magic");
  }
  StoreHeader h;
  h.version = detail::get_le<std::uint16_t>(bytes.data() + 4);
  if (h.version != kStoreVersion) fail(ErrorCode::kFormat, "unsupported store version " + std::to_string(h.version));
  h.config.n = detail::get_le<std::uint16_t>(bytes.data() + 6);
  h.config.dims = bytes[8];
  h.config.bits = bytes[9];
  try {
    validate(h.config);
  } catch (const Error& e) {
    fail(ErrorCode::kFormat, std::string("store header: ") + e.what());
  }
  if (bytes.size() < store_header_size(h.config.dims)) fail(ErrorCode::kFormat, "store truncated: short header");
  for (int k = 0; k < h.config.dims; ++k) h.scale.push_back(detail::get_f32(bytes.data() + 10 + 4 * k));
  h.count = detail::get_le<std::uint64_t>(bytes.data() + 10 + 4 * h.config.dims);
  return h;
}

VectorStore::VectorStore(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
VectorStore::VectorStore(VectorStore&&) noexcept = default;
VectorStore& VectorStore::operator=(VectorStore&&) noexcept = default;
VectorStore::~VectorStore() = default;

VectorStore VectorStore::in_memory(const EncoderConfig& config, std::span<const float> scale) {
  return VectorStore(std::make_unique<Impl>(config, scale));
}

VectorStore VectorStore::create(const std::filesystem::path& path, const EncoderConfig& config,
                                std::span<const float> scale) {
  auto impl = std::make_unique<Impl>(config, scale);
  impl->fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (impl->fd < 0) {
    if (errno == EEXIST) fail(ErrorCode::kInvalidArgument, "store already exists: " + path.string());
    fail_errno("cannot create store " + path.string());
  }
  if (::flock(impl->fd, LOCK_EX | LOCK_NB) != 0) fail_errno("cannot lock store " + path.string());
  auto header = impl->header;
  header.count = 0;
  const auto bytes = encode_store_header(header);
  write_all(impl->fd, bytes.data(), bytes.size(), 0);
  sync_fd(impl->fd);
  return VectorStore(std::move(impl));
}

VectorStore VectorStore::open(const std::filesystem::path& path, OpenMode mode) {
  const bool rw = mode == OpenMode::kReadWrite;
  const int fd = ::open(path.c_str(), (rw ? O_RDWR : O_RDONLY) | O_CLOEXEC);
  if (fd < 0) fail_errno("cannot open store " + path.string());
  struct FdGuard {
    int fd;
    ~FdGuard() {
      if (fd >= 0) ::close(fd);
    }
  } guard{fd};

  if (rw && ::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    fail(ErrorCode::kIo, "store " + path.string() + " is locked by another writer");
  }
  struct stat st {};
  if (::fstat(fd, &st) != 0) fail_errno("cannot stat store " + path.string());
  const auto file_size = static_cast<std::uint64_t>(st.st_size);

  std::vector<std::uint8_t> head(std::min<std::uint64_t>(file_size, store_header_size(3)));
  if (head.size() < 10) fail(ErrorCode::kFormat, "store truncated: short header");
  read_all(fd, head.data(), head.size(), 0);
  const auto header = decode_store_header(head);

  auto impl = std::make_unique<Impl>(header.config, header.scale);
  const auto needed = impl->header_bytes + header.count * impl->record_bytes;
  if (file_size < needed) {
    fail(ErrorCode::kFormat, "store truncated: header declares " + std::to_string(header.count) +
                                 " records but file holds " + std::to_string(file_size) + " bytes");
  }

  std::vector<std::uint8_t> buffer(impl->chunk_records * impl->record_bytes);
  std::uint64_t loaded = 0;
  while (loaded < header.count) {
    const auto batch = static_cast<std::size_t>(std::min<std::uint64_t>(impl->chunk_records, header.count - loaded));
    read_all(fd, buffer.data(), batch * impl->record_bytes, impl->header_bytes + loaded * impl->record_bytes);
    auto chunk = impl->new_chunk();
    for (std::size_t i = 0; i < batch; ++i) {
      impl->place_bytes(*chunk, i, buffer.data() + i * impl->record_bytes);
      if (!impl->ids.insert(chunk->ids[i]).second) {
        fail(ErrorCode::kFormat, "store contains duplicate segment id " + std::to_string(chunk->ids[i]));
      }
    }
    impl->chunks.push_back(std::move(chunk));
    loaded += batch;
  }
  impl->count = header.count;
  impl->writable = rw;
  impl->fd = rw ? fd : -1;
  guard.fd = rw ? -1 : fd;
  return VectorStore(std::move(impl));
}

VectorStore VectorStore::open_or_create(const std::filesystem::path& path, const EncoderConfig& config,
                                        std::span<const float> scale) {
  if (!std::filesystem::exists(path)) return create(path, config, scale);
  auto store = open(path, OpenMode::kReadWrite);
  const auto& have = store.config();
  if (have.n != config.n || have.dims != config.dims || have.bits != config.bits) {
    fail(ErrorCode::kInvalidArgument,
         "store " + path.string() + " was created with n=" + std::to_string(have.n) + " d=" +
             std::to_string(have.dims) + " b=" + std::to_string(have.bits) + ", requested n=" +
             std::to_string(config.n) + " d=" + std::to_string(config.dims) + " b=" + std::to_string(config.bits));
  }
  if (!std::ranges::equal(store.scale(), scale)) {
    fail(ErrorCode::kInvalidArgument, "store " + path.string() + " was built with a different embedding scale");
  }
  return store;
}

const EncoderConfig& VectorStore::config() const noexcept { return impl_->header.config; }
const std::vector<float>& VectorStore::scale() const noexcept { return impl_->header.scale; }
std::size_t VectorStore::dimensions() const noexcept { return impl_->dims; }
std::size_t VectorStore::payload_bytes() const noexcept { return impl_->payload_bytes; }
bool VectorStore::writable() const noexcept { return impl_->writable; }

std::uint64_t VectorStore::count() const {
  std::shared_lock lock(impl_->publish_mutex);
  return impl_->count;
}

StoreHeader VectorStore::header() const {
  auto h = impl_->header;
  h.count = count();
  return h;
}

bool VectorStore::contains(SegmentId id) const {
  std::shared_lock lock(impl_->publish_mutex);
  return impl_->ids.contains(id);
}

void VectorStore::append(SegmentId id, const SemanticFeatureVector& vector) {
  std::pair<SegmentId, SemanticFeatureVector> one{id, vector};
  append_batch(std::span(&one, 1));
}

void VectorStore::append_batch(std::span<const std::pair<SegmentId, SemanticFeatureVector>> records) {
  if (!impl_->writable) fail(ErrorCode::kInvalidArgument, "store opened read-only");
  std::lock_guard lock(impl_->write_mutex);
  std::vector<std::pair<SegmentId, QuantizedVector>> quantized;
  quantized.reserve(records.size());
  std::unordered_set<SegmentId> batch_ids;
  for (const auto& [id, v] : records) {
    if (impl_->ids.contains(id) || !batch_ids.insert(id).second) {
      fail(ErrorCode::kDuplicate, "segment id " + std::to_string(id) + " already stored");
    }
    quantized.emplace_back(id, impl_->check_and_quantize(v));
  }
  if (quantized.empty()) return;
  impl_->commit(quantized);
}

SegmentId VectorStore::segment_id(std::size_t index) const {
  const auto snap = impl_->snapshot();
  if (index >= snap.count) fail(ErrorCode::kNotFound, "record index out of range");
  return snap.chunks[index / impl_->chunk_records]->ids[index % impl_->chunk_records];
}

QuantizedVector VectorStore::record(std::size_t index) const {
  const auto snap = impl_->snapshot();
  if (index >= snap.count) fail(ErrorCode::kNotFound, "record index out of range");
  const auto& chunk = *snap.chunks[index / impl_->chunk_records];
  const auto base = (index % impl_->chunk_records) * impl_->dims;
  const auto& cfg = impl_->header.config;
  QuantizedVector q{cfg.n, cfg.dims, cfg.bits, std::vector<std::uint32_t>(impl_->dims)};
  for (std::size_t i = 0; i < impl_->dims; ++i) {
    switch (cfg.bits) {
      case 32: q.codes[i] = std::bit_cast<std::uint32_t>(chunk.f32[base + i]); break;
      case 16: q.codes[i] = chunk.u16[base + i]; break;
      default: q.codes[i] = chunk.u8[base + i]; break;
    }
  }
  return q;
}

SemanticFeatureVector VectorStore::vector(std::size_t index) const { return dequantize(record(index)); }

double VectorStore::distance_to(std::span<const float> query, std::size_t index) const {
  if (query.size() != impl_->dims) fail(ErrorCode::kInvalidArgument, "query length does not match store");
  const auto snap = impl_->snapshot();
  if (index >= snap.count) fail(ErrorCode::kNotFound, "record index out of range");
  return impl_->distance(query.data(), *snap.chunks[index / impl_->chunk_records], index % impl_->chunk_records);
}

std::vector<QueryResult> VectorStore::knn(const SemanticFeatureVector& query, std::size_t k,
                                          std::size_t threads) const {
  const auto& cfg = impl_->header.config;
  if (query.n != cfg.n || query.dims != cfg.dims) {
    fail(ErrorCode::kInvalidArgument, "query shape does not match store");
  }
  return knn(query.values, k, threads);
}

std::vector<QueryResult> VectorStore::knn(std::span<const float> query, std::size_t k,
                                          std::size_t threads) const {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (query.size() != impl_->dims) {
    fail(ErrorCode::kInvalidArgument, "query has " + std::to_string(query.size()) + " values, store expects " +
                                          std::to_string(impl_->dims));
  }
  const auto snap = impl_->snapshot();
  const auto total = static_cast<std::size_t>(snap.count);
  const auto workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(total, 1));
  const auto per_chunk = impl_->chunk_records;

  std::vector<std::vector<QueryResult>> heaps(workers);
  auto scan = [&](std::size_t w) {
    const auto lo = total * w / workers;
    const auto hi = total * (w + 1) / workers;
    auto& heap = heaps[w];
    heap.reserve(std::min(k, hi - lo) + 1);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& chunk = *snap.chunks[i / per_chunk];
      const auto slot = i % per_chunk;
      QueryResult r{chunk.ids[slot], impl_->distance(query.data(), chunk, slot), 0};
      if (heap.size() < k) {
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end(), heap_less);
      } else if (result_before(r, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), heap_less);
        heap.back() = r;
        std::push_heap(heap.begin(), heap.end(), heap_less);
      }
    }
  };

  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(scan, w);
    scan(0);
  }

  std::vector<QueryResult> merged;
  for (auto& h : heaps) merged.insert(merged.end(), h.begin(), h.end());
  std::sort(merged.begin(), merged.end(), result_before);
  if (merged.size() > k) merged.resize(k);
  for (std::size_t i = 0; i < merged.size(); ++i) merged[i].rank = static_cast<std::uint32_t>(i + 1);
  return merged;
}

}  // namespace semsketch
