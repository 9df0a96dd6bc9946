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

#ifndef SEMSKETCH_EMBEDDING_TABLE_HPP
#define SEMSKETCH_EMBEDDING_TABLE_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semsketch/matrix.hpp"
#include "semsketch/tsne.hpp"
#include "semsketch/vocabulary.hpp"
#include "semsketch/word_vectors.hpp"

namespace semsketch {

/// Per-concept coordinates normalized to [-1, 1]. Row i belongs to concept i.
class EmbeddingTable {
 public:
  /// Takes already-normalized values. Throws unless every value is finite
  /// and within [-1, 1] and the shapes line up.
  EmbeddingTable(std::vector<std::string> labels, int dims, std::vector<float> scale,
                 std::vector<float> coords);

  std::size_t size() const noexcept { return labels_.size(); }
  int dims() const noexcept { return dims_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<float>& scale() const noexcept { return scale_; }
  const std::vector<float>& coords() const noexcept { return coords_; }

  bool contains(ConceptId id) const noexcept { return id < labels_.size(); }
  std::span<const float> operator[](ConceptId id) const {
    return {coords_.data() + static_cast<std::size_t>(id) * dims_,
            static_cast<std::size_t>(dims_)};
  }

  /// Coordinates multiplied back by the stored scale.
  std::vector<double> denormalized(ConceptId id) const;

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  std::vector<std::string> labels_;
  int dims_ = 0;
  std::vector<float> scale_;
  std::vector<float> coords_;
};

/// Scales each dimension by its max-abs value (1.0 for an all-zero
/// dimension) so that every component lies in [-1, 1].
EmbeddingTable build_embedding_table(const ConceptVocabulary& vocab, const Matrix& coords);

void write_embedding_table(std::ostream& out, const EmbeddingTable& table);
EmbeddingTable read_embedding_table(std::istream& in);
void persist_embedding_table(const EmbeddingTable& table, const std::filesystem::path& path);
EmbeddingTable load_embedding_table(const std::filesystem::path& path);

/// Nudges every row that exactly equals an earlier row by seeded noise of
/// magnitude 1e-8 so the affinity bisection never sees coincident points.
/// Returns the number of rows perturbed.
std::size_t separate_duplicate_rows(Matrix& points, std::uint64_t seed);

struct EmbeddingBuild {
  EmbeddingTable table;
  double initial_kl = 0.0;
  double final_kl = 0.0;
  double perplexity = 0.0;  // after capping
};

/// Word vectors -> affinities -> t-SNE -> normalized table. The perplexity
/// is capped at (m - 1) / 3; m must be at least 4.
EmbeddingBuild build_embedding(const ConceptVocabulary& vocab, const WordVectorTable& vectors,
                               int dims, const TsneParams& params);

}  // namespace semsketch

#endif  // SEMSKETCH_EMBEDDING_TABLE_HPP
