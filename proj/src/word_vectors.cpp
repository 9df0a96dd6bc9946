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

#include "semsketch/word_vectors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "semsketch/error.hpp"
#include "text_util.hpp"

namespace semsketch {

WordVectorTable parse_word_vectors(std::istream& in, const ConceptVocabulary& vocab) {
  // Collect the tokens we need first so we only keep those rows.
  std::set<std::string> wanted;
  for (const auto& c : vocab.concepts()) {
    for (auto token : detail::split_ws(c.label)) wanted.emplace(token);
  }

  std::unordered_map<std::string, std::vector<double>> exact;
  std::unordered_map<std::string, std::vector<double>> folded;
  std::size_t width = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto fields = detail::split_ws(detail::strip_cr(raw));
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 && detail::parse_number<std::size_t>(fields[0]) &&
        detail::parse_number<std::size_t>(fields[1])) {
      continue;  // "<count> <width>" header
    }
    if (fields.size() < 2) {
      fail(ErrorCode::kFormat, "word vectors line " + std::to_string(line_no) + ": no values");
    }
    if (width == 0) width = fields.size() - 1;
    if (fields.size() - 1 != width) {
      fail(ErrorCode::kFormat, "word vectors line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(width) + " values, got " +
                                   std::to_string(fields.size() - 1));
    }
    const std::string token(fields[0]);
    const auto lowered = normalize_label(token);
    const bool need_exact = wanted.contains(token) && !exact.contains(token);
    const bool need_folded = wanted.contains(lowered) && !folded.contains(lowered);
    if (!need_exact && !need_folded) continue;

    std::vector<double> values(width);
    for (std::size_t i = 0; i < width; ++i) {
      const auto v = detail::parse_number<double>(fields[i + 1]);
      if (!v || !std::isfinite(*v)) {
        fail(ErrorCode::kFormat, "word vectors line " + std::to_string(line_no) + ": bad value");
      }
      values[i] = *v;
    }
    if (need_folded) folded.emplace(lowered, values);
    if (need_exact) exact.emplace(token, std::move(values));
  }

  std::vector<std::string> missing;
  for (const auto& token : wanted) {
    if (!exact.contains(token) && !folded.contains(token)) missing.push_back(token);
  }
  if (!missing.empty()) {
    std::string msg = "word vectors missing for:";
    for (const auto& t : missing) msg += " " + t;
    fail(ErrorCode::kNotFound, msg);
  }

  Matrix rows(vocab.size(), width);
  for (const auto& c : vocab.concepts()) {
    const auto tokens = detail::split_ws(c.label);
    auto out = rows.row(c.id);
    for (auto token : tokens) {
      const std::string key(token);
      const auto it = exact.find(key);
      const auto& v = it != exact.end() ? it->second : folded.at(key);
      for (std::size_t i = 0; i < width; ++i) out[i] += v[i];
    }
    for (auto& x : out) x /= static_cast<double>(tokens.size());
  }
  return WordVectorTable(std::move(rows));
}

WordVectorTable load_word_vectors(const std::filesystem::path& path, const ConceptVocabulary& vocab) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open word vectors " + path.string());
  return parse_word_vectors(in, vocab);
}

}  // namespace semsketch
