/**
 * Copyright 2026 The ABRW Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "abrw/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "abrw/error.hpp"
#include "abrw/rng.hpp"

namespace abrw {

namespace {

using Dense = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// S * M with S = X X^T, X the unit-normalized attribute rows.
Dense apply_similarity(const SparseMatrix& unit, const Dense& m) {
  Dense xtm = Dense::Zero(static_cast<Eigen::Index>(unit.cols()), m.cols());
  for (std::size_t i = 0; i < unit.rows(); ++i) {
    const auto r = unit.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) xtm.row(r.cols[k]) += r.values[k] * m.row(static_cast<Eigen::Index>(i));
  }
  Dense out = Dense::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < unit.rows(); ++i) {
    const auto r = unit.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) out.row(static_cast<Eigen::Index>(i)) += r.values[k] * xtm.row(r.cols[k]);
  }
  return out;
}

Dense orthonormal_basis(const Dense& y) {
  Eigen::HouseholderQR<Dense> qr(y);
  return qr.householderQ() * Dense::Identity(y.rows(), y.cols());
}

double standard_normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument away from 0.
  const double u = 1.0 - rng.uniform();
  const double v = rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace

EmbeddingMatrix embed_transition(const TransitionMatrix& transition, const WalkConfig& walk,
                                 const TrainConfig& train, int threads) {
  const auto corpus = generate_walks(transition, walk, threads);
  const auto pairs = extract_pairs(corpus, train.window, transition.size());
  const auto sampler = build_unigram_sampler(corpus, transition.size(), train.ns_exponent);
  return abrw::train(pairs, sampler, train);
}

EmbeddingMatrix deepwalk_embed(const SparseMatrix& adjacency, const WalkConfig& walk, const TrainConfig& train,
                               int threads) {
  if (adjacency.nnz() == 0) throw InvalidArgument("DeepWalk needs at least one link");
  return embed_transition(row_normalize(adjacency), walk, train, threads);
}

EmbeddingMatrix abrw_embed(const AttributedGraph& graph, const FusionConfig& fusion, const WalkConfig& walk,
                           const TrainConfig& train, int threads) {
  return embed_transition(build_abrw_transition(graph, fusion, threads), walk, train, threads);
}

EmbeddingMatrix attrpure_embed(const SparseMatrix& attributes, std::size_t dim, const RandomizedSvdConfig& config) {
  const std::size_t n = attributes.rows();
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  if (n < dim) throw InvalidArgument("AttrPure needs at least as many nodes as dimensions");
  const SparseMatrix unit = AttributeSimilarity(attributes).unit_rows();
  const auto rank = static_cast<Eigen::Index>(std::min(dim + config.oversampling, n));

  Rng rng(derive_seed(config.seed, 0x737664));
  Dense omega(static_cast<Eigen::Index>(n), rank);
  for (Eigen::Index i = 0; i < omega.rows(); ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) omega(i, j) = standard_normal(rng);
  }
  Dense q = orthonormal_basis(apply_similarity(unit, omega));
  for (std::size_t it = 0; it < config.power_iterations; ++it) q = orthonormal_basis(apply_similarity(unit, q));

  // S is symmetric positive semidefinite, so its SVD is its eigendecomposition.
  Dense b = q.transpose() * apply_similarity(unit, q);
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Dense> eig(b);
  const auto& values = eig.eigenvalues();  // ascending
  const Dense u = q * eig.eigenvectors();

  EmbeddingMatrix z(n, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const Eigen::Index col = rank - 1 - static_cast<Eigen::Index>(k);
    Eigen::Index arg = 0;
    u.col(col).cwiseAbs().maxCoeff(&arg);
    const double sign = u(arg, col) < 0.0 ? -1.0 : 1.0;
    const double scale = sign * std::sqrt(std::max(values(col), 0.0));
    for (std::size_t i = 0; i < n; ++i) z(i, k) = scale * u(static_cast<Eigen::Index>(i), col);
  }
  return z;
}

}  // namespace abrw
