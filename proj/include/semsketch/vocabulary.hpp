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

#ifndef SEMSKETCH_VOCABULARY_HPP
#define SEMSKETCH_VOCABULARY_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semsketch {

using ConceptId = std::uint32_t;

inline constexpr ConceptId kBackground = 0;
inline constexpr std::string_view kBackgroundLabel = "background";

struct Concept {
  ConceptId id = 0;
  std::string label;
  std::string source;

  friend bool operator==(const Concept&, const Concept&) = default;
};

/// The set of detectable concepts. Ids are dense in [0, size()), id 0 is
/// always "background" and labels are unique lowercase strings.
class ConceptVocabulary {
 public:
  /// Validates and adopts `concepts`. Labels are lowercased before the
  /// uniqueness check.
  explicit ConceptVocabulary(std::vector<Concept> concepts);

  std::size_t size() const noexcept { return concepts_.size(); }
  const Concept& operator[](ConceptId id) const { return concepts_.at(id); }
  const std::vector<Concept>& concepts() const noexcept { return concepts_; }

  std::optional<ConceptId> find(std::string_view label) const;
  bool contains(ConceptId id) const noexcept { return id < concepts_.size(); }

 private:
  std::vector<Concept> concepts_;
};

/// Lowercases ASCII letters; everything else (including spaces) is kept.
std::string normalize_label(std::string_view label);

/// Parses `<id>\t<label>\t<source>` records. Blank lines are skipped.
ConceptVocabulary parse_vocabulary(std::istream& in);
ConceptVocabulary load_vocabulary(const std::filesystem::path& path);

}  // namespace semsketch

#endif  // SEMSKETCH_VOCABULARY_HPP
