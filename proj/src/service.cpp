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

#include "semsketch/service.hpp"

#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "semsketch/error.hpp"
#include "semsketch/ingest.hpp"
#include "semsketch/label_map.hpp"

namespace semsketch {

using json = nlohmann::json;

namespace {

Response error_response(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

}  // namespace

Rgb palette_color(ConceptId id) {
  constexpr double kGoldenAngle = 137.508;
  constexpr double kSaturation = 0.8;
  constexpr double kValue = 0.95;
  const double hue = std::fmod(static_cast<double>(id) * kGoldenAngle, 360.0);
  const double chroma = kValue * kSaturation;
  const double sector = hue / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(sector)) {
    case 0: r = chroma, g = x; break;
    case 1: r = x, g = chroma; break;
    case 2: g = chroma, b = x; break;
    case 3: g = x, b = chroma; break;
    case 4: r = x, b = chroma; break;
    default: r = chroma, b = x; break;
  }
  const double offset = kValue - chroma;
  auto to_byte = [&](double c) { return static_cast<std::uint8_t>(std::lround((c + offset) * 255.0)); };
  return {to_byte(r), to_byte(g), to_byte(b)};
}

std::vector<PaletteEntry> make_palette(const EmbeddingTable& table) {
  std::vector<PaletteEntry> out;
  out.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto id = static_cast<ConceptId>(i);
    out.push_back({id, table.labels()[i], palette_color(id)});
  }
  return out;
}

Service::Service(EmbeddingTable table, VectorStore store, std::size_t query_threads)
    : table_(std::move(table)), store_(std::move(store)), query_threads_(std::max<std::size_t>(query_threads, 1)) {
  if (table_.dims() != store_.config().dims) {
    fail(ErrorCode::kInvalidArgument, "embedding table and store disagree on d");
  }
  json palette = json::array();
  for (const auto& e : make_palette(table_)) {
    palette.push_back({{"id", e.id}, {"label", e.label}, {"color", {e.color[0], e.color[1], e.color[2]}}});
  }
  palette_json_ = palette.dump();
}

Response Service::concepts() const { return {200, palette_json_}; }

Response Service::info() const {
  const auto& cfg = store_.config();
  return {200, json{{"n", cfg.n},
                    {"d", cfg.dims},
                    {"b", cfg.bits},
                    {"count", store_.count()},
                    {"vocabulary_size", table_.size()}}
                   .dump()};
}

Response Service::ingest(const std::string& meta_json, std::span<const std::vector<std::uint8_t>> label_maps) {
  const auto meta = json::parse(meta_json, nullptr, false);
  if (meta.is_discarded() || !meta.is_object() || !meta.contains("segment_id") ||
      !meta["segment_id"].is_number_unsigned()) {
    return error_response(400, "metadata must be a JSON object with an unsigned integer segment_id");
  }
  const auto id = meta["segment_id"].get<SegmentId>();
  if (label_maps.empty()) return error_response(400, "no label maps supplied");

  std::vector<LabelMap> maps;
  try {
    for (const auto& bytes : label_maps) maps.push_back(parse_label_map(bytes, table_.size()));
  } catch (const Error& e) {
    return error_response(400, std::string("malformed label map: ") + e.what());
  }

  std::lock_guard lock(ingest_mutex_);
  if (store_.contains(id)) return error_response(409, "segment id " + std::to_string(id) + " already stored");
  try {
    store_.append(id, encode_label_maps(maps, store_.config().n, table_));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDuplicate) return error_response(409, e.what());
    if (e.code() == ErrorCode::kInvalidArgument) return error_response(400, e.what());
    return error_response(500, e.what());
  }
  return {200, json{{"segment_id", id}, {"count", store_.count()}}.dump()};
}

Response Service::query(const std::string& body) const {
  const auto req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error_response(400, "request body must be a JSON object");
  const auto n = store_.config().n;
  if (!req.contains("n") || !req["n"].is_number_integer() || req["n"].get<std::int64_t>() != n) {
    return error_response(400, "n must equal the store grid size " + std::to_string(n));
  }
  const auto& cells = req.contains("cells") ? req["cells"] : json();
  const auto expected = static_cast<std::size_t>(n) * n;
  if (!cells.is_array() || cells.size() != expected) {
    return error_response(400, "cells must be an array of " + std::to_string(expected) + " concept ids");
  }
  GridMap grid{n, std::vector<ConceptId>(expected)};
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& c = cells[i];
    if (!c.is_number_integer()) return error_response(400, "cell " + std::to_string(i) + " is not an integer");
    const auto id = c.get<std::int64_t>();
    if (id < 0 || static_cast<std::uint64_t>(id) >= table_.size()) {
      return error_response(400, "invalid concept id " + std::to_string(id) + " at cell " + std::to_string(i));
    }
    grid.cells[i] = static_cast<ConceptId>(id);
  }
  std::int64_t k = 10;
  if (req.contains("k")) {
    if (!req["k"].is_number_integer()) return error_response(400, "k must be an integer");
    k = req["k"].get<std::int64_t>();
  }
  if (k < 1) return error_response(422, "k must be at least 1");

  const auto results = store_.knn(encode_grid(grid, table_), static_cast<std::size_t>(k), query_threads_);
  json out = json::array();
  for (const auto& r : results) {
    out.push_back({{"segment_id", r.segment_id}, {"distance", r.distance}, {"rank", r.rank}});
  }
  return {200, json{{"results", std::move(out)}}.dump()};
}

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  impl_->server.Get("/api/concepts", [&svc, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.concepts());
  });
  impl_->server.Get("/api/info", [&svc, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.info());
  });
  impl_->server.Post("/api/query", [&svc, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.query(req.body));
  });
  impl_->server.Post("/api/ingest", [&svc, reply](const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data()) {
      reply(res, error_response(400, "ingest expects multipart/form-data"));
      return;
    }
    std::string meta;
    bool have_meta = false;
    std::vector<std::vector<std::uint8_t>> maps;
    for (const auto& [name, part] : req.files) {
      const bool is_json = part.content_type.rfind("application/json", 0) == 0;
      if ((name == "meta" || is_json) && !have_meta) {
        meta = part.content;
        have_meta = true;
      } else {
        maps.emplace_back(part.content.begin(), part.content.end());
      }
    }
    if (!have_meta) {
      reply(res, error_response(400, "missing JSON part with segment_id"));
      return;
    }
    reply(res, svc.ingest(meta, maps));
  });
  impl_->server.set_exception_handler([reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      reply(res, error_response(500, e.what()));
    } catch (...) {
      reply(res, error_response(500, "unknown error"));
    }
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) fail(ErrorCode::kIo, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) fail(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() {
  if (!impl_->server.listen_after_bind()) fail(ErrorCode::kIo, "server stopped with an error");
}

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace semsketch
