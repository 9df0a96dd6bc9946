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

#ifndef SEMSKETCH_TSNE_HPP
#define SEMSKETCH_TSNE_HPP

#include <cstdint>
#include <vector>

#include "semsketch/matrix.hpp"

namespace semsketch {

/**
 * Exact t-SNE.
 *
 * The concept vocabulary is small (tens to a few hundred labels) so every
 * routine here works on dense m x m matrices; there is no Barnes-Hut or
 * interpolation approximation. Entropies are measured in bits.
 */

struct TsneParams {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iters = 250;
  double early_exaggeration = 12.0;
  int early_exaggeration_iters = 250;
  std::uint64_t seed = 42;
};

/// Throws if the parameters are inconsistent (non-positive perplexity or
/// learning rate, iterations < early_exaggeration_iters, ...).
void validate(const TsneParams& params);

struct Affinities {
  /// Symmetric joint probabilities, zero diagonal, summing to one.
  Matrix joint;
  /// Row-conditional probabilities p(j|i) before symmetrization.
  Matrix conditional;
  /// Gaussian precision exp(-beta * |xi - xj|^2) found for each row.
  std::vector<double> betas;
};

/// Per-row bisection on the Gaussian precision so that every conditional
/// distribution has entropy log2(perplexity), followed by symmetrization
/// p_ij = (p(j|i) + p(i|j)) / 2m.
///
/// Requires at least 3 finite points and 1 <= perplexity <= m - 1. Throws
/// Error(kNumeric) when a row cannot be bracketed within 64 expansion steps,
/// which happens when too many points coincide.
Affinities compute_affinities(const Matrix& points, double perplexity);

/// Student-t similarities q_ij of an embedding (zero diagonal, sum one).
Matrix student_t_similarities(const Matrix& embedding);

/// KL(P || Q) where Q comes from `embedding`. Terms with p_ij = 0 vanish.
double kl_divergence(const Matrix& joint, const Matrix& embedding);

/// dKL(P || Q) / dY = 4 sum_j (p_ij - q_ij) (y_i - y_j) / (1 + |y_i - y_j|^2).
Matrix tsne_gradient(const Matrix& joint, const Matrix& embedding);

struct TsneResult {
  Matrix embedding;
  double initial_kl = 0.0;
  double final_kl = 0.0;
};

/// Gradient descent with momentum, per-coordinate gains and early
/// exaggeration. Initial coordinates are N(0, 1e-4^2) drawn from a
/// generator seeded with params.seed, so the result is a pure function of
/// the arguments. `dims` must be 2 or 3.
TsneResult tsne_optimize(const Matrix& joint, int dims, const TsneParams& params);

}  // namespace semsketch

#endif  // SEMSKETCH_TSNE_HPP
