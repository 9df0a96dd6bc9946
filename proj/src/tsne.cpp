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

#include "semsketch/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "semsketch/error.hpp"

namespace semsketch {

namespace {

constexpr double kEntropyTolerance = 1e-5;  // bits
constexpr int kMaxExpansions = 64;
constexpr int kMaxSearchSteps = 400;

void require_finite(const Matrix& m, const char* what) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) fail(ErrorCode::kNumeric, std::string(what) + " contains non-finite values");
  }
}

void require_square(const Matrix& p, const Matrix& y) {
  if (p.rows() != p.cols()) fail(ErrorCode::kInvalidArgument, "affinity matrix must be square");
  if (p.rows() != y.rows()) {
    fail(ErrorCode::kInvalidArgument, "affinity matrix and embedding disagree on point count");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return sum;
}

// Finds beta so that the row distribution exp(-beta * shifted[j]) has the
// target entropy. `shifted` holds squared distances minus their minimum, so
// the largest weight is always exp(0) = 1 and the normalizer never
// underflows. Writes the normalized row into `probs`.
double solve_row(std::size_t row, const std::vector<double>& shifted, double target_bits,
                 std::vector<double>& probs) {
  const auto count = shifted.size();
  double mean = 0.0;
  for (double s : shifted) mean += s;
  mean /= static_cast<double>(count);

  auto entropy_bits = [&](double beta) {
    double sum = 0.0;
    double weighted = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      probs[j] = std::exp(-beta * shifted[j]);
      sum += probs[j];
      weighted += shifted[j] * probs[j];
    }
    for (auto& p : probs) p /= sum;
    return (beta * weighted / sum + std::log(sum)) / std::numbers::ln2;
  };

  if (mean == 0.0) {
    // Every neighbor is equidistant: the entropy does not depend on beta.
    const double h = entropy_bits(1.0);
    if (std::abs(h - target_bits) < kEntropyTolerance) return 1.0;
    fail(ErrorCode::kNumeric, "row " + std::to_string(row) +
                                  ": all neighbors equidistant, perplexity unreachable");
  }

  if (target_bits >= std::log2(static_cast<double>(count)) - kEntropyTolerance) {
    // Maximal entropy: only the uniform row reaches it.
    entropy_bits(0.0);
    return 0.0;
  }

  double beta = 1.0 / mean;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  int expansions = 0;
  for (int step = 0; step < kMaxSearchSteps; ++step) {
    const double diff = entropy_bits(beta) - target_bits;
    if (std::abs(diff) < kEntropyTolerance) return beta;
    if (diff > 0) {
      lo = beta;
      if (std::isinf(hi)) {
        if (++expansions > kMaxExpansions) break;
        beta *= 2.0;
      } else {
        beta = lo + (hi - lo) / 2.0;
      }
    } else {
      hi = beta;
      if (lo == 0.0) {
        if (++expansions > kMaxExpansions) break;
        beta /= 2.0;
      } else {
        beta = lo + (hi - lo) / 2.0;
      }
    }
  }
  fail(ErrorCode::kNumeric, "row " + std::to_string(row) +
                                ": bandwidth search did not converge (coincident points?)");
}

}  // namespace

void validate(const TsneParams& p) {
  if (!(p.perplexity > 0.0)) fail(ErrorCode::kInvalidArgument, "perplexity must be positive");
  if (!(p.learning_rate > 0.0)) fail(ErrorCode::kInvalidArgument, "learning rate must be positive");
  if (p.iterations < 0 || p.early_exaggeration_iters < 0 || p.momentum_switch_iters < 0) {
    fail(ErrorCode::kInvalidArgument, "iteration counts must be non-negative");
  }
  if (p.iterations < p.early_exaggeration_iters) {
    fail(ErrorCode::kInvalidArgument, "iterations must be >= early exaggeration iterations");
  }
  if (!(p.momentum >= 0.0 && p.momentum < 1.0) || !(p.final_momentum >= 0.0 && p.final_momentum < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "momentum must lie in [0, 1)");
  }
  if (!(p.early_exaggeration >= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "early exaggeration must be >= 1");
  }
}

Affinities compute_affinities(const Matrix& points, double perplexity) {
  const auto m = points.rows();
  if (m < 3) fail(ErrorCode::kInvalidArgument, "need at least 3 points");
  require_finite(points, "input points");
  if (!(perplexity >= 1.0) || perplexity > static_cast<double>(m - 1)) {
    fail(ErrorCode::kInvalidArgument,
         "perplexity must lie in [1, " + std::to_string(m - 1) + "]");
  }
  const double target = std::log2(perplexity);

  Affinities out{Matrix(m, m), Matrix(m, m), std::vector<double>(m)};
  std::vector<double> shifted(m - 1);
  std::vector<double> probs(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    double min_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0, k = 0; j < m; ++j) {
      if (j == i) continue;
      shifted[k] = squared_distance(points.row(i), points.row(j));
      min_d = std::min(min_d, shifted[k]);
      ++k;
    }
    for (auto& s : shifted) s -= min_d;
    out.betas[i] = solve_row(i, shifted, target, probs);
    for (std::size_t j = 0, k = 0; j < m; ++j) {
      if (j == i) continue;
      out.conditional(i, j) = probs[k++];
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      out.joint(i, j) = out.conditional(i, j) + out.conditional(j, i);
      total += out.joint(i, j);
    }
  }
  for (auto& v : out.joint.data()) v /= total;
  return out;
}

Matrix student_t_similarities(const Matrix& y) {
  const auto m = y.rows();
  Matrix q(m, m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double num = 1.0 / (1.0 + squared_distance(y.row(i), y.row(j)));
      q(i, j) = num;
      q(j, i) = num;
      total += 2.0 * num;
    }
  }
  for (auto& v : q.data()) v /= total;
  return q;
}

double kl_divergence(const Matrix& p, const Matrix& y) {
  require_square(p, y);
  const auto q = student_t_similarities(y);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.data().size(); ++i) {
    const double pij = p.data()[i];
    if (pij > 0.0) kl += pij * std::log(pij / std::max(q.data()[i], std::numeric_limits<double>::min()));
  }
  return kl;
}

Matrix tsne_gradient(const Matrix& p, const Matrix& y) {
  require_square(p, y);
  require_finite(y, "embedding");
  const auto m = y.rows();
  const auto dims = y.cols();

  Matrix num(m, m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = 1.0 / (1.0 + squared_distance(y.row(i), y.row(j)));
      num(i, j) = v;
      num(j, i) = v;
      total += 2.0 * v;
    }
  }

  Matrix grad(m, dims);
  for (std::size_t i = 0; i < m; ++i) {
    auto g = grad.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double mult = (p(i, j) - num(i, j) / total) * num(i, j);
      for (std::size_t k = 0; k < dims; ++k) g[k] += mult * (y(i, k) - y(j, k));
    }
    for (auto& v : g) v *= 4.0;
  }
  return grad;
}

TsneResult tsne_optimize(const Matrix& joint, int dims, const TsneParams& params) {
  validate(params);
  if (dims != 2 && dims != 3) fail(ErrorCode::kInvalidArgument, "embedding dimensions must be 2 or 3");
  if (joint.rows() != joint.cols() || joint.rows() < 2) {
    fail(ErrorCode::kInvalidArgument, "affinity matrix must be square with at least 2 rows");
  }
  require_finite(joint, "affinity matrix");
  const auto m = joint.rows();
  const auto d = static_cast<std::size_t>(dims);

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> init(0.0, 1e-4);
  Matrix y(m, d);
  for (auto& v : y.data()) v = init(rng);

  Matrix exaggerated = joint;
  for (auto& v : exaggerated.data()) v *= params.early_exaggeration;

  std::vector<double> update(m * d, 0.0);
  std::vector<double> gains(m * d, 1.0);

  TsneResult result;
  result.initial_kl = kl_divergence(joint, y);
  for (int iter = 0; iter < params.iterations; ++iter) {
    const auto& p = iter < params.early_exaggeration_iters ? exaggerated : joint;
    const auto grad = tsne_gradient(p, y);
    const double momentum = iter < params.momentum_switch_iters ? params.momentum : params.final_momentum;

    auto& coords = y.data();
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const double g = grad.data()[i];
      gains[i] = (g > 0.0) != (update[i] > 0.0) ? gains[i] + 0.2 : gains[i] * 0.8;
      gains[i] = std::max(gains[i], 0.01);
      update[i] = momentum * update[i] - params.learning_rate * gains[i] * g;
      coords[i] += update[i];
    }

    for (std::size_t k = 0; k < d; ++k) {
      double mean = 0.0;
      for (std::size_t i = 0; i < m; ++i) mean += y(i, k);
      mean /= static_cast<double>(m);
      for (std::size_t i = 0; i < m; ++i) y(i, k) -= mean;
    }

    for (double v : coords) {
      if (!std::isfinite(v)) {
        fail(ErrorCode::kNumeric, "t-SNE diverged at iteration " + std::to_string(iter));
      }
    }
  }
  result.final_kl = kl_divergence(joint, y);
  result.embedding = std::move(y);
  return result;
}

}  // namespace semsketch
