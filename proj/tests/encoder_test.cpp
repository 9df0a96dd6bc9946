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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "semsketch/encoder.hpp"
#include "semsketch/error.hpp"

using namespace semsketch;

namespace {

EmbeddingTable random_table(std::size_t m, int dims, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<std::string> labels;
  std::vector<float> coords(m * dims);
  for (std::size_t i = 0; i < m; ++i) labels.push_back("c" + std::to_string(i));
  for (auto& v : coords) v = u(rng);
  return EmbeddingTable(labels, dims, std::vector<float>(dims, 1.0f), coords);
}

GridMap random_grid(std::uint32_t n, std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<ConceptId> pick(0, static_cast<ConceptId>(m - 1));
  GridMap g{n, std::vector<ConceptId>(std::size_t{n} * n)};
  for (auto& c : g.cells) c = pick(rng);
  return g;
}

}  // namespace

TEST_CASE("encode_grid: 32x32 with two dimensions is 2048 long") {
  std::mt19937_64 rng(1);
  const auto t = random_table(21, 2, rng);
  const auto v = encode_grid(random_grid(32, 21, rng), t);
  CHECK(v.values.size() == 2048);
  CHECK(v.n == 32);
  CHECK(v.dims == 2);
}

TEST_CASE("encode_grid: uniform grid repeats one coordinate") {
  const EmbeddingTable t({"background", "a"}, 2, {1.0f, 1.0f}, {0.0f, 0.0f, 0.5f, -0.25f});
  const auto v = encode_grid(GridMap{2, {1, 1, 1, 1}}, t);
  CHECK(v.values == std::vector<float>{0.5f, -0.25f, 0.5f, -0.25f, 0.5f, -0.25f, 0.5f, -0.25f});
}

TEST_CASE("encode_grid: slices equal per-cell lookups") {
  std::mt19937_64 rng(2);
  for (int dims : {2, 3}) {
    const auto t = random_table(13, dims, rng);
    for (int trial = 0; trial < 50; ++trial) {
      const auto g = random_grid(1 + trial % 9, 13, rng);
      const auto v = encode_grid(g, t);
      REQUIRE(v.values.size() == g.cells.size() * dims);
      for (std::size_t i = 0; i < g.cells.size(); ++i) {
        for (int k = 0; k < dims; ++k) CHECK(v.values[i * dims + k] == t[g.cells[i]][k]);
      }
    }
  }
}

TEST_CASE("encode_grid: unknown id and bad shape") {
  std::mt19937_64 rng(3);
  const auto t = random_table(4, 2, rng);
  CHECK_THROWS_AS(encode_grid(GridMap{1, {4}}, t), Error);
  CHECK_THROWS_AS(encode_grid(GridMap{2, {0, 1, 2}}, t), Error);
}

TEST_CASE("encode_baseline: one-hot blocks") {
  const auto single = encode_baseline(GridMap{1, {2}}, 3);
  CHECK(single.bits == std::vector<bool>{false, false, true});
  CHECK_THROWS_AS(encode_baseline(GridMap{1, {3}}, 3), Error);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 2 + trial;
    const auto g = random_grid(1 + trial % 7, m, rng);
    const auto b = encode_baseline(g, m);
    CHECK(b.bits.size() == g.cells.size() * m);
    CHECK(static_cast<std::size_t>(std::count(b.bits.begin(), b.bits.end(), true)) == g.cells.size());
    // Decode each block by its single set bit.
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
      std::size_t argmax = m;
      for (std::size_t j = 0; j < m; ++j) {
        if (b.bits[i * m + j]) argmax = j;
      }
      CHECK(argmax == g.cells[i]);
    }
  }
}

TEST_CASE("quantization error bounds") {
  CHECK(std::abs(dequantize_value(quantize_value(0.5, 8), 8) - 0.5) <= 1.0 / 255);
  for (int b : {8, 16, 32}) {
    CHECK(dequantize_value(quantize_value(-1.0, b), b) == -1.0f);
    CHECK(dequantize_value(quantize_value(1.0, b), b) == 1.0f);
  }
  CHECK(quantize_value(1.0, 8) == 255);
  CHECK(quantize_value(-1.0, 16) == 0);
  CHECK(quantize_value(1.0 + 1e-10, 8) == 255);
  CHECK_THROWS_AS(quantize_value(1.0 + 1e-6, 8), Error);
  CHECK_THROWS_AS(quantize_value(std::nan(""), 8), Error);
  CHECK_THROWS_AS(quantize_value(0.0, 12), Error);

  std::mt19937_64 rng(6);
  const auto t = random_table(21, 2, rng);
  for (int b : {8, 16, 32}) {
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto v = encode_grid(random_grid(4, 21, rng), t);
      const auto q = quantize(v, b);
      for (auto c : q.codes) {
        if (b < 32) CHECK(c < (1u << b));
      }
      const auto back = dequantize(q);
      for (std::size_t i = 0; i < v.values.size(); ++i) {
        worst = std::max(worst, std::abs(double(back.values[i]) - double(v.values[i])));
      }
    }
    CAPTURE(b);
    if (b == 32) CHECK(worst == 0.0);
    else CHECK(worst <= 1.0 / ((1u << b) - 1));
  }
}

TEST_CASE("l1_distance") {
  CHECK(l1_distance(std::vector<float>{0, 0}, std::vector<float>{1, -1}) == 2.0);
  CHECK_THROWS_AS(l1_distance(std::vector<float>{0, 0}, std::vector<float>{1}), Error);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (std::size_t len : {1u, 7u, 8u, 9u, 100u, 2048u, 6144u}) {
    std::vector<float> a(len), b(len);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    CHECK(l1_distance(a, a) == 0.0);
    CHECK(l1_distance(a, b) == l1_distance(b, a));
    const double want = oracle::l1(a, b);
    CHECK(std::abs(l1_distance(a, b) - want) <= 1e-6 * want);
  }
}

TEST_CASE("l1_distance decomposes over cells") {
  std::mt19937_64 rng(10);
  for (int dims : {2, 3}) {
    const auto t = random_table(10, dims, rng);
    for (int trial = 0; trial < 100; ++trial) {
      const auto g1 = random_grid(6, 10, rng), g2 = random_grid(6, 10, rng);
      double want = 0.0;
      for (std::size_t i = 0; i < g1.cells.size(); ++i) want += oracle::l1(t[g1.cells[i]], t[g2.cells[i]]);
      const double got = l1_distance(encode_grid(g1, t).values, encode_grid(g2, t).values);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("a closer concept gives a lower distance") {
  // Query: cat on grass. Candidate B swaps cat for dog, candidate C for car.
  const EmbeddingTable t({"background", "cat", "dog", "car", "grass"}, 2, {1, 1},
                         {0, 0, 0.8f, 0.7f, 0.75f, 0.6f, -0.9f, 0.4f, 0.1f, -0.8f});
  const GridMap q{2, {4, 1, 4, 4}}, b{2, {4, 2, 4, 4}}, c{2, {4, 3, 4, 4}};
  const auto vq = encode_grid(q, t);
  CHECK(l1_distance(vq.values, encode_grid(b, t).values) < l1_distance(vq.values, encode_grid(c, t).values));
}

TEST_CASE("storage report") {
  CHECK(storage_report({32, 2, 32}).bits_per_vector == 65536);
  CHECK(storage_report({32, 2, 32}).ratio == doctest::Approx(0.2667).epsilon(1e-3));
  CHECK(storage_report({16, 3, 32}).ratio == doctest::Approx(0.100).epsilon(1e-9));
  CHECK(storage_report({8, 2, 8}).ratio == doctest::Approx(1024.0 / 245760.0).epsilon(1e-12));
  CHECK(storage_report({8, 2, 8}, 1024).ratio == 1.0);
  CHECK_THROWS_AS(storage_report({8, 2, 8}, 0), Error);
  CHECK_THROWS_AS(storage_report({8, 4, 8}), Error);
  CHECK_THROWS_AS(storage_report({0, 2, 8}), Error);

  for (std::uint32_t n = 1; n < 64; ++n) {
    for (int d : {2, 3}) {
      for (int b : {8, 16, 32}) {
        const auto r = storage_report({n, d, b});
        CHECK(r.bits_per_vector == std::uint64_t{n} * n * d * b);
        CHECK(storage_report({n + 1, d, b}).ratio > r.ratio);
        if (d == 2) CHECK(storage_report({n, 3, b}).ratio > r.ratio);
        if (b < 32) CHECK(storage_report({n, d, b * 2}).ratio > r.ratio);
      }
    }
  }
}
