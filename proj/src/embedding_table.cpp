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

#include "semsketch/embedding_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "semsketch/error.hpp"
#include "text_util.hpp"

namespace semsketch {

namespace {

constexpr std::string_view kMagic = "SEMB";
constexpr int kFormatVersion = 1;

std::string format_float(float v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

float parse_float(std::string_view s, std::size_t line_no) {
  const auto v = detail::parse_number<float>(s);
  if (!v || !std::isfinite(*v)) {
    fail(ErrorCode::kFormat, "embedding table line " + std::to_string(line_no) + ": bad number '" +
                                 std::string(s) + "'");
  }
  return *v;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::vector<std::string> labels, int dims, std::vector<float> scale,
                               std::vector<float> coords)
    : labels_(std::move(labels)), dims_(dims), scale_(std::move(scale)), coords_(std::move(coords)) {
  if (dims_ != 2 && dims_ != 3) fail(ErrorCode::kInvalidArgument, "embedding dimension must be 2 or 3");
  if (labels_.empty()) fail(ErrorCode::kInvalidArgument, "embedding table is empty");
  if (scale_.size() != static_cast<std::size_t>(dims_)) {
    fail(ErrorCode::kInvalidArgument, "scale vector length must equal d");
  }
  if (coords_.size() != labels_.size() * static_cast<std::size_t>(dims_)) {
    fail(ErrorCode::kInvalidArgument, "coordinate count must equal m * d");
  }
  for (float s : scale_) {
    if (!std::isfinite(s) || !(s > 0.0f)) fail(ErrorCode::kInvalidArgument, "scale must be positive");
  }
  for (float v : coords_) {
    if (!std::isfinite(v) || v < -1.0f || v > 1.0f) {
      fail(ErrorCode::kInvalidArgument, "embedding coordinates must lie in [-1, 1]");
    }
  }
}

std::vector<double> EmbeddingTable::denormalized(ConceptId id) const {
  const auto row = (*this)[id];
  std::vector<double> out(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) out[k] = static_cast<double>(row[k]) * scale_[k];
  return out;
}

EmbeddingTable build_embedding_table(const ConceptVocabulary& vocab, const Matrix& coords) {
  if (coords.rows() != vocab.size()) {
    fail(ErrorCode::kInvalidArgument, "need exactly one coordinate row per concept");
  }
  for (double v : coords.data()) {
    if (!std::isfinite(v)) fail(ErrorCode::kNumeric, "non-finite embedding coordinate");
  }
  const auto m = coords.rows();
  const auto d = coords.cols();
  std::vector<double> max_abs(d, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) max_abs[k] = std::max(max_abs[k], std::abs(coords(i, k)));
  }
  std::vector<float> scale(d);
  std::vector<float> values(m * d);
  for (std::size_t k = 0; k < d; ++k) {
    const double s = max_abs[k] > 0.0 ? max_abs[k] : 1.0;
    scale[k] = static_cast<float>(s);
    for (std::size_t i = 0; i < m; ++i) values[i * d + k] = static_cast<float>(coords(i, k) / s);
  }
  std::vector<std::string> labels;
  labels.reserve(m);
  for (const auto& c : vocab.concepts()) labels.push_back(c.label);
  return EmbeddingTable(std::move(labels), static_cast<int>(d), std::move(scale), std::move(values));
}

void write_embedding_table(std::ostream& out, const EmbeddingTable& table) {
  const auto d = static_cast<std::size_t>(table.dims());
  out << kMagic << ' ' << kFormatVersion << ' ' << table.size() << ' ' << d << '\n';
  for (std::size_t k = 0; k < d; ++k) out << (k ? " " : "") << format_float(table.scale()[k]);
  out << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << i << '\t' << table.labels()[i] << '\t';
    const auto row = table[static_cast<ConceptId>(i)];
    for (std::size_t k = 0; k < d; ++k) out << (k ? " " : "") << format_float(row[k]);
    out << '\n';
  }
}

EmbeddingTable read_embedding_table(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw)) fail(ErrorCode::kFormat, "embedding table is empty");
  const auto header = detail::split_ws(detail::strip_cr(raw));
  if (header.size() != 4 || header[0] != kMagic) fail(ErrorCode::kFormat, "not an embedding table");
  const auto version = detail::parse_number<int>(header[1]);
  if (version != kFormatVersion) {
    fail(ErrorCode::kFormat, "unsupported embedding table version " + std::string(header[1]));
  }
  const auto m = detail::parse_number<std::size_t>(header[2]);
  const auto d = detail::parse_number<int>(header[3]);
  if (!m || !d || *m == 0 || *d < 1) fail(ErrorCode::kFormat, "bad embedding table header");

  std::size_t line_no = 1;
  if (!std::getline(in, raw)) fail(ErrorCode::kFormat, "embedding table truncated: no scale line");
  ++line_no;
  const auto scale_fields = detail::split_ws(detail::strip_cr(raw));
  if (scale_fields.size() != static_cast<std::size_t>(*d)) {
    fail(ErrorCode::kFormat, "scale line must have " + std::to_string(*d) + " values");
  }
  std::vector<float> scale;
  for (auto f : scale_fields) scale.push_back(parse_float(f, line_no));

  std::vector<std::string> labels;
  std::vector<float> coords;
  labels.reserve(*m);
  coords.reserve(*m * static_cast<std::size_t>(*d));
  while (labels.size() < *m) {
    if (!std::getline(in, raw)) {
      fail(ErrorCode::kFormat, "embedding table truncated: expected " + std::to_string(*m) +
                                   " rows, got " + std::to_string(labels.size()));
    }
    ++line_no;
    const auto fields = detail::split(detail::strip_cr(raw), '\t');
    if (fields.size() != 3) {
      fail(ErrorCode::kFormat, "embedding table line " + std::to_string(line_no) +
                                   ": expected <id>\\t<label>\\t<coords>");
    }
    if (detail::parse_number<std::size_t>(fields[0]) != labels.size()) {
      fail(ErrorCode::kFormat, "embedding table line " + std::to_string(line_no) + ": ids must be dense");
    }
    const auto values = detail::split_ws(fields[2]);
    if (values.size() != static_cast<std::size_t>(*d)) {
      fail(ErrorCode::kFormat, "embedding table line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(*d) + " values, got " + std::to_string(values.size()));
    }
    labels.emplace_back(fields[1]);
    for (auto v : values) coords.push_back(parse_float(v, line_no));
  }
  while (std::getline(in, raw)) {
    if (!detail::split_ws(detail::strip_cr(raw)).empty()) {
      fail(ErrorCode::kFormat, "embedding table has more rows than its header declares");
    }
  }
  try {
    return EmbeddingTable(std::move(labels), *d, std::move(scale), std::move(coords));
  } catch (const Error& e) {
    fail(ErrorCode::kFormat, std::string("invalid embedding table: ") + e.what());
  }
}

void persist_embedding_table(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  write_embedding_table(out, table);
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

EmbeddingTable load_embedding_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open embedding table " + path.string());
  return read_embedding_table(in);
}

std::size_t separate_duplicate_rows(Matrix& points, std::uint64_t seed) {
  constexpr double kMagnitude = 1e-8;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::size_t perturbed = 0;
  for (std::size_t i = 1; i < points.rows(); ++i) {
    auto is_duplicate = [&] {
      for (std::size_t j = 0; j < i; ++j) {
        if (std::ranges::equal(points.row(i), points.row(j))) return true;
      }
      return false;
    };
    if (!is_duplicate()) continue;
    ++perturbed;
    do {
      std::vector<double> noise(points.cols());
      double norm = 0.0;
      for (auto& v : noise) {
        v = normal(rng);
        norm += v * v;
      }
      norm = std::sqrt(norm);
      auto row = points.row(i);
      for (std::size_t k = 0; k < row.size(); ++k) row[k] += kMagnitude * noise[k] / norm;
    } while (is_duplicate());
  }
  return perturbed;
}

EmbeddingBuild build_embedding(const ConceptVocabulary& vocab, const WordVectorTable& vectors, int dims,
                               const TsneParams& params) {
  validate(params);
  const auto m = vocab.size();
  if (m < 4) fail(ErrorCode::kInvalidArgument, "t-SNE needs at least 4 concepts");
  if (vectors.size() != m) fail(ErrorCode::kInvalidArgument, "word vector table does not match vocabulary");

  const double perplexity = std::min(params.perplexity, static_cast<double>(m - 1) / 3.0);
  Matrix points = vectors.matrix();
  separate_duplicate_rows(points, params.seed);
  const auto affinities = compute_affinities(points, perplexity);
  auto run = tsne_optimize(affinities.joint, dims, params);
  return {build_embedding_table(vocab, run.embedding), run.initial_kl, run.final_kl, perplexity};
}

}  // namespace semsketch
