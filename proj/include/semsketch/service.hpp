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

#ifndef SEMSKETCH_SERVICE_HPP
#define SEMSKETCH_SERVICE_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "semsketch/embedding_table.hpp"
#include "semsketch/vector_store.hpp"

namespace semsketch {

using Rgb = std::array<std::uint8_t, 3>;

struct PaletteEntry {
  ConceptId id = 0;
  std::string label;
  Rgb color{};
};

/// HSV(id * 137.508 deg mod 360, 0.8, 0.95) in 8-bit RGB.
Rgb palette_color(ConceptId id);
std::vector<PaletteEntry> make_palette(const EmbeddingTable& table);

/// A status code and a JSON body.
struct Response {
  int status = 200;
  std::string body;
};

/**
 * Request handlers behind the HTTP endpoints:
 *
 *   GET  /api/concepts  palette
 *   GET  /api/info      {n, d, b, count, vocabulary_size}
 *   POST /api/ingest    multipart: JSON part {segment_id} + SLM1 parts
 *   POST /api/query     {n, cells, k} -> {results: [{segment_id, distance, rank}]}
 *
 * Handlers are safe to call concurrently. Ingests are serialized among
 * themselves; queries never wait for them.
 */
class Service {
 public:
  Service(EmbeddingTable table, VectorStore store, std::size_t query_threads = 1);

  Response concepts() const;
  Response info() const;
  Response ingest(const std::string& meta_json,
                  std::span<const std::vector<std::uint8_t>> label_maps);
  Response query(const std::string& body) const;

  const VectorStore& store() const noexcept { return store_; }
  const EmbeddingTable& table() const noexcept { return table_; }

 private:
  EmbeddingTable table_;
  VectorStore store_;
  std::size_t query_threads_;
  std::string palette_json_;
  std::mutex ingest_mutex_;
};

/// Thin cpp-httplib front end over a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace semsketch

#endif  // SEMSKETCH_SERVICE_HPP
