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

#include "semsketch/vocabulary.hpp"

#include <fstream>
#include <unordered_set>

#include "semsketch/error.hpp"
#include "text_util.hpp"

namespace semsketch {

std::string normalize_label(std::string_view label) {
  std::string out(label);
  for (auto& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

ConceptVocabulary::ConceptVocabulary(std::vector<Concept> concepts) : concepts_(std::move(concepts)) {
  if (concepts_.empty()) fail(ErrorCode::kFormat, "vocabulary is empty");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    auto& c = concepts_[i];
    if (c.id != i) {
      fail(ErrorCode::kFormat, "concept ids must be dense and ascending from 0; expected " +
                                   std::to_string(i) + ", got " + std::to_string(c.id));
    }
    c.label = normalize_label(c.label);
    if (c.label.empty()) fail(ErrorCode::kFormat, "empty label for id " + std::to_string(c.id));
    if (!seen.insert(c.label).second) fail(ErrorCode::kFormat, "duplicate label '" + c.label + "'");
  }
  if (concepts_.front().label != kBackgroundLabel) {
    fail(ErrorCode::kFormat, "id 0 must be 'background', got '" + concepts_.front().label + "'");
  }
}

std::optional<ConceptId> ConceptVocabulary::find(std::string_view label) const {
  const auto wanted = normalize_label(label);
  for (const auto& c : concepts_) {
    if (c.label == wanted) return c.id;
  }
  return std::nullopt;
}

ConceptVocabulary parse_vocabulary(std::istream& in) {
  std::vector<Concept> concepts;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::strip_cr(raw);
    if (detail::split_ws(line).empty()) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 3) {
      fail(ErrorCode::kFormat, "vocabulary line " + std::to_string(line_no) +
                                   ": expected <id>\\t<label>\\t<source>");
    }
    const auto id = detail::parse_number<ConceptId>(fields[0]);
    if (!id) fail(ErrorCode::kFormat, "vocabulary line " + std::to_string(line_no) + ": bad id");
    concepts.push_back({*id, std::string(fields[1]), std::string(fields[2])});
  }
  return ConceptVocabulary(std::move(concepts));
}

ConceptVocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open vocabulary " + path.string());
  return parse_vocabulary(in);
}

}  // namespace semsketch
