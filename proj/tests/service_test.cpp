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

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <thread>

#include "doctest.h"
#include "oracles.hpp"
#include "semsketch/bench.hpp"
#include "semsketch/ingest.hpp"
#include "semsketch/service.hpp"
#include "test_util.hpp"

using namespace semsketch;
using nlohmann::json;

namespace {

std::string sketch(std::uint32_t n, const std::vector<ConceptId>& cells, std::optional<int> k = std::nullopt) {
  json j{{"n", n}, {"cells", cells}};
  if (k) j["k"] = *k;
  return j.dump();
}

std::vector<std::uint8_t> map_bytes(const LabelMap& m) { return write_label_map(m); }

Service make_service(std::uint32_t n = 8, int bits = 32) {
  const auto table = synthetic_embedding_table(21, 2, 7);
  return Service(table, VectorStore::in_memory({n, 2, bits}, table.scale()));
}

}  // namespace

TEST_CASE("palette colors") {
  CHECK(palette_color(0) == Rgb{242, 48, 48});
  // Hue 137.508 degrees.
  const auto c1 = palette_color(1);
  CHECK(c1[1] == 242);
  CHECK(c1[0] == 48);
  CHECK(c1[2] == 105);
  std::set<Rgb> seen;
  for (ConceptId id = 0; id < 150; ++id) seen.insert(palette_color(id));
  CHECK(seen.size() == 150);

  auto svc = make_service();
  const auto body = json::parse(svc.concepts().body);
  REQUIRE(body.size() == 21);
  CHECK(body[0]["label"] == "background");
  CHECK(body[3]["id"] == 3);
  CHECK(body[3]["color"] == json(palette_color(3)));
}

TEST_CASE("ingest and query") {
  auto svc = make_service(32);
  std::mt19937_64 rng(21);
  const auto m = test::random_label_map(64, 64, 21, rng);
  const std::vector<std::vector<std::uint8_t>> parts{map_bytes(m)};

  const auto ok = svc.ingest(R"({"segment_id": 200})", parts);
  CHECK(ok.status == 200);
  CHECK(svc.store().count() == 1);
  CHECK(svc.ingest(R"({"segment_id": 200})", parts).status == 409);
  CHECK(svc.store().count() == 1);
  CHECK(svc.ingest(R"({"segment": 1})", parts).status == 400);
  CHECK(svc.ingest("not json", parts).status == 400);
  const std::vector<std::vector<std::uint8_t>> junk{{'S', 'L'}};
  CHECK(svc.ingest(R"({"segment_id": 201})", junk).status == 400);
  CHECK(svc.ingest(R"({"segment_id": 201})", {}).status == 400);
  CHECK(svc.store().count() == 1);

  const auto grid = oracle::aggregate({m}, 32);
  const auto res = svc.query(sketch(32, grid.cells, 1));
  REQUIRE(res.status == 200);
  const auto results = json::parse(res.body)["results"];
  REQUIRE(results.size() == 1);
  CHECK(results[0]["segment_id"] == 200);
  CHECK(results[0]["distance"] == 0.0);
  CHECK(results[0]["rank"] == 1);

  const auto info = json::parse(svc.info().body);
  CHECK(info == json{{"n", 32}, {"d", 2}, {"b", 32}, {"count", 1}, {"vocabulary_size", 21}});
}

TEST_CASE("query validation") {
  auto svc = make_service(4);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 3; ++i) {
    const std::vector<std::vector<std::uint8_t>> parts{map_bytes(test::random_label_map(8, 8, 21, rng))};
    REQUIRE(svc.ingest(json{{"segment_id", i}}.dump(), parts).status == 200);
  }
  const std::vector<ConceptId> cells(16, 0);
  const auto three = json::parse(svc.query(sketch(4, cells, 5)).body)["results"];
  CHECK(three.size() == 3);
  for (std::size_t i = 0; i < three.size(); ++i) {
    CHECK(three[i]["rank"] == i + 1);
    if (i > 0) CHECK(three[i]["distance"] >= three[i - 1]["distance"]);
  }
  CHECK(json::parse(svc.query(sketch(4, cells)).body)["results"].size() == 3);

  auto bad = cells;
  bad[5] = 9999;
  const auto r = svc.query(sketch(4, bad, 5));
  CHECK(r.status == 400);
  CHECK(r.body.find("9999") != std::string::npos);
  CHECK(svc.query(sketch(4, cells, 0)).status == 422);
  CHECK(svc.query(sketch(4, cells, -3)).status == 422);
  CHECK(svc.query(sketch(5, std::vector<ConceptId>(25, 0), 5)).status == 400);
  CHECK(svc.query(sketch(4, std::vector<ConceptId>(15, 0), 5)).status == 400);
  CHECK(svc.query("{").status == 400);
  CHECK(svc.query(R"({"n": 4, "cells": "x", "k": 1})").status == 400);
  CHECK(svc.query(R"({"n": 4, "cells": [0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,-1], "k": 1})").status == 400);
}

TEST_CASE("queries are read-only and match the offline pipeline") {
  for (int bits : {8, 32}) {
    auto svc = make_service(8, bits);
    std::mt19937_64 rng(23);
    std::vector<std::pair<SegmentId, std::vector<float>>> records;
    for (SegmentId id = 0; id < 60; ++id) {
      const auto m = test::random_label_map(16, 16, 21, rng);
      const std::vector<std::vector<std::uint8_t>> parts{map_bytes(m)};
      REQUIRE(svc.ingest(json{{"segment_id", id * 3}}.dump(), parts).status == 200);
      const auto v = quantize(encode_grid(oracle::aggregate({m}, 8), svc.table()), bits);
      records.emplace_back(id * 3, dequantize(v).values);
    }
    const auto before = svc.store().count();
    for (int q = 0; q < 20; ++q) {
      const auto grid = random_grid(8, 21, rng);
      const auto res = svc.query(sketch(8, grid.cells, 7));
      REQUIRE(res.status == 200);
      const auto got = json::parse(res.body)["results"];
      const auto want = oracle::knn(records, encode_grid(grid, svc.table()).values, 7);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got[i]["segment_id"] == want[i].id);
        CHECK(got[i]["distance"].get<double>() == doctest::Approx(want[i].distance).epsilon(1e-9));
      }
    }
    CHECK(svc.store().count() == before);
  }
}

TEST_CASE("HTTP round trip") {
  auto svc = make_service(8);
  HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);

  auto concepts = client.Get("/api/concepts");
  for (int i = 0; i < 50 && !concepts; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    concepts = client.Get("/api/concepts");
  }
  REQUIRE(concepts);
  CHECK(concepts->status == 200);
  CHECK(json::parse(concepts->body).size() == 21);

  std::mt19937_64 rng(24);
  const auto m = test::random_label_map(32, 32, 21, rng);
  const auto bytes = map_bytes(m);
  httplib::MultipartFormDataItems items{
      {"meta", R"({"segment_id": 42})", "", "application/json"},
      {"map", std::string(bytes.begin(), bytes.end()), "42.slm", "application/octet-stream"}};
  auto ingest = client.Post("/api/ingest", items);
  REQUIRE(ingest);
  CHECK(ingest->status == 200);
  ingest = client.Post("/api/ingest", items);
  REQUIRE(ingest);
  CHECK(ingest->status == 409);
  auto plain = client.Post("/api/ingest", "{}", "application/json");
  REQUIRE(plain);
  CHECK(plain->status == 400);

  auto query = client.Post("/api/query", sketch(8, oracle::aggregate({m}, 8).cells, 3), "application/json");
  REQUIRE(query);
  CHECK(query->status == 200);
  const auto results = json::parse(query->body)["results"];
  REQUIRE(results.size() == 1);
  CHECK(results[0]["segment_id"] == 42);
  CHECK(results[0]["distance"] == 0.0);

  auto info = client.Get("/api/info");
  REQUIRE(info);
  CHECK(json::parse(info->body)["count"] == 1);

  server.stop();
  loop.join();
}
