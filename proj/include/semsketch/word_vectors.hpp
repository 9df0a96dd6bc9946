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

#ifndef SEMSKETCH_WORD_VECTORS_HPP
#define SEMSKETCH_WORD_VECTORS_HPP

#include <filesystem>
#include <istream>
#include <span>
#include <vector>

#include "semsketch/matrix.hpp"
#include "semsketch/vocabulary.hpp"

namespace semsketch {

/// One word vector per vocabulary concept, indexed by concept id.
class WordVectorTable {
 public:
  explicit WordVectorTable(Matrix rows) : rows_(std::move(rows)) {}

  std::size_t width() const noexcept { return rows_.cols(); }
  std::size_t size() const noexcept { return rows_.rows(); }
  std::span<const double> operator[](ConceptId id) const { return rows_.row(id); }
  const Matrix& matrix() const noexcept { return rows_; }

 private:
  Matrix rows_;
};

/// Reads the text export format (`<token> <v1> ... <vw>` per line) and
/// resolves every vocabulary label. A label made of several space-separated
/// tokens gets the component-wise mean of its token vectors. An optional
/// leading `<count> <width>` header line is ignored. Tokens are matched
/// exactly first, then case-insensitively.
///
/// Throws Error(kNotFound) naming every token that could not be resolved.
WordVectorTable parse_word_vectors(std::istream& in, const ConceptVocabulary& vocab);
WordVectorTable load_word_vectors(const std::filesystem::path& path,
                                  const ConceptVocabulary& vocab);

}  // namespace semsketch

#endif  // SEMSKETCH_WORD_VECTORS_HPP
