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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "semsketch/error.hpp"
#include "semsketch/label_map.hpp"
#include "test_util.hpp"

using namespace semsketch;

namespace {

std::vector<std::uint8_t> bytes_of(std::initializer_list<int> values) {
  std::vector<std::uint8_t> out;
  for (int v : values) out.push_back(static_cast<std::uint8_t>(v));
  return out;
}

LabelMap make_map(std::uint32_t w, std::uint32_t h, std::vector<std::uint16_t> cells) {
  return LabelMap{w, h, "t", std::move(cells)};
}

}  // namespace

TEST_CASE("parse a minimal 1x1 map") {
  const auto bytes = bytes_of({'S', 'L', 'M', '1', 1, 0, 0, 0, 1, 0, 0, 0, 2, 'c', 'o', 0, 0});
  const auto m = parse_label_map(bytes);
  CHECK(m.width == 1);
  CHECK(m.height == 1);
  CHECK(m.source == "co");
  CHECK(m.cells == std::vector<std::uint16_t>{0});
  CHECK(write_label_map(m) == bytes);
}

TEST_CASE("header fields are little-endian") {
  LabelMap m{3, 2, "", {1, 2, 3, 0x0102, 5, 6}};
  const auto b = write_label_map(m);
  REQUIRE(b.size() == 4 + 4 + 4 + 1 + 12);
  CHECK(b[4] == 3);
  CHECK(b[8] == 2);
  CHECK(b[12] == 0);
  CHECK(b[13 + 6] == 0x02);
  CHECK(b[13 + 7] == 0x01);
}

TEST_CASE("random maps round trip byte for byte") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = test::random_label_map(16, 16, 21, rng, "src" + std::to_string(trial));
    const auto bytes = write_label_map(m);
    const auto parsed = parse_label_map(bytes, 21);
    CHECK(parsed == m);
    CHECK(write_label_map(parsed) == bytes);
  }
}

TEST_CASE("file round trip") {
  test::TempDir dir;
  std::mt19937_64 rng(2);
  const auto m = test::random_label_map(7, 5, 4, rng);
  write_label_map_file(m, dir / "a.slm");
  CHECK(read_label_map_file(dir / "a.slm") == m);
  CHECK_THROWS_AS(read_label_map_file(dir / "none.slm"), Error);
}

TEST_CASE("malformed label maps") {
  std::mt19937_64 rng(4);
  const auto good = write_label_map(test::random_label_map(4, 4, 5, rng));
  auto code_of = [](std::span<const std::uint8_t> b, std::size_t m = 0) {
    try {
      parse_label_map(b, m);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode{};
  };
  SUBCASE("truncated payload") {
    for (std::size_t cut = 1; cut < good.size(); cut += 3) {
      CHECK(code_of(std::span(good).first(good.size() - cut)) == ErrorCode::kFormat);
    }
  }
  SUBCASE("bad magic") {
    auto b = good;
    b[3] = '2';
    CHECK(code_of(b) == ErrorCode::kFormat);
  }
  SUBCASE("trailing bytes") {
    auto b = good;
    b.push_back(0);
    CHECK(code_of(b) == ErrorCode::kFormat);
  }
  SUBCASE("id outside the vocabulary") {
    auto m = make_map(2, 1, {0, 9});
    const auto b = write_label_map(m);
    CHECK(code_of(b, 9) == ErrorCode::kFormat);
    CHECK(code_of(b, 10) == ErrorCode{});
  }
  SUBCASE("zero extent") {
    const auto b = bytes_of({'S', 'L', 'M', '1', 0, 0, 0, 0, 1, 0, 0, 0, 0});
    CHECK(code_of(b) == ErrorCode::kFormat);
  }
}

TEST_CASE("aggregate: hand examples") {
  const std::uint16_t a = 4, b = 5, c = 6, d = 7;
  CHECK(aggregate(std::vector{make_map(2, 2, {a, a, b, c})}, 1).cells == std::vector<ConceptId>{a});
  const auto quadrants = make_map(4, 4, {a, a, b, b,  //
                                         a, a, b, b,  //
                                         c, c, d, d,  //
                                         c, c, d, d});
  CHECK(aggregate(std::vector{quadrants}, 2).cells == std::vector<ConceptId>{a, b, c, d});
  CHECK(aggregate(std::vector{make_map(2, 1, {7, 3})}, 1).cells == std::vector<ConceptId>{3});
  CHECK(aggregate(std::vector{make_map(2, 1, {3, 7})}, 1).cells == std::vector<ConceptId>{3});
}

TEST_CASE("aggregate: non-divisible extents use floor boundaries") {
  // 5 columns, n=2: column ranges [0,2) and [2,5).
  const auto m = make_map(5, 1, {1, 1, 2, 3, 3});
  CHECK(aggregate(std::vector{m}, 1).cells == std::vector<ConceptId>{1});
  const auto tall = make_map(1, 5, {1, 1, 2, 3, 3});
  const auto g = aggregate(std::vector{make_map(5, 2, {1, 1, 2, 3, 3, 1, 1, 2, 3, 3})}, 2);
  CHECK(g.cells == std::vector<ConceptId>{1, 3, 1, 3});
  CHECK_THROWS_AS(aggregate(std::vector{tall}, 2), Error);
}

TEST_CASE("aggregate: matches the histogram oracle on random maps") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    for (std::uint32_t n : {1u, 2u, 4u, 8u}) {
      const auto m = test::random_label_map(16, 16, 6, rng);
      CHECK(aggregate(std::vector{m}, n) == oracle::aggregate({m}, n));
    }
  }
}

TEST_CASE("aggregate: pooled sources of different resolutions") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::uint32_t> side(8, 40);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<LabelMap> maps;
    for (int s = 0; s < 3; ++s) maps.push_back(test::random_label_map(side(rng), side(rng), 4, rng));
    for (std::uint32_t n : {1u, 3u, 8u}) CHECK(aggregate(maps, n) == oracle::aggregate(maps, n));
  }
}

TEST_CASE("aggregate: invariants") {
  std::mt19937_64 rng(8);
  SUBCASE("constant map gives a constant grid") {
    const auto m = make_map(12, 9, std::vector<std::uint16_t>(108, 5));
    for (std::uint32_t n = 1; n <= 9; ++n) {
      CHECK(aggregate(std::vector{m}, n).cells == std::vector<ConceptId>(n * n, 5));
    }
  }
  SUBCASE("n equal to the extent is the identity") {
    const auto m = test::random_label_map(10, 10, 30, rng);
    const auto g = aggregate(std::vector{m}, 10);
    CHECK(std::equal(g.cells.begin(), g.cells.end(), m.cells.begin(), m.cells.end()));
  }
  SUBCASE("order of maps does not matter") {
    std::vector<LabelMap> maps;
    for (int i = 0; i < 4; ++i) maps.push_back(test::random_label_map(12 + i, 16 - i, 3, rng));
    const auto want = aggregate(maps, 4);
    std::sort(maps.begin(), maps.end(), [](const LabelMap& x, const LabelMap& y) { return x.width < y.width; });
    do {
      CHECK(aggregate(maps, 4) == want);
    } while (std::next_permutation(maps.begin(), maps.end(),
                                   [](const LabelMap& x, const LabelMap& y) { return x.width < y.width; }));
  }
  SUBCASE("output always has n*n cells drawn from the input") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = test::random_label_map(20, 20, 3, rng);
      const auto g = aggregate(std::vector{m}, 5);
      CHECK(g.n == 5);
      CHECK(g.cells.size() == 25);
      for (auto id : g.cells) CHECK(id < 3);
    }
  }
}

TEST_CASE("aggregate: argument errors") {
  CHECK_THROWS_AS(aggregate(std::vector<LabelMap>{}, 1), Error);
  const auto m = make_map(4, 3, std::vector<std::uint16_t>(12, 0));
  CHECK_THROWS_AS(aggregate(std::vector{m}, 0), Error);
  CHECK_THROWS_AS(aggregate(std::vector{m}, 4), Error);
  CHECK_NOTHROW(aggregate(std::vector{m}, 3));
}
