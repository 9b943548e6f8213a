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

#pragma once

#include <cstddef>
#include <cstdint>

#include "abrw/graph.hpp"
#include "abrw/sgns.hpp"
#include "abrw/transition.hpp"
#include "abrw/walker.hpp"

namespace abrw {

/// Walks over an arbitrary transition matrix, then skip-gram training. Shared
/// tail of every random-walk method.
EmbeddingMatrix embed_transition(const TransitionMatrix& transition, const WalkConfig& walk,
                                 const TrainConfig& train, int threads = 1);

/// Walks on row_normalize(W) only. Takes the adjacency alone so the
/// attributes can never leak in.
EmbeddingMatrix deepwalk_embed(const SparseMatrix& adjacency, const WalkConfig& walk, const TrainConfig& train,
                               int threads = 1);

/// Walks on the fused structural/attribute transition matrix.
EmbeddingMatrix abrw_embed(const AttributedGraph& graph, const FusionConfig& fusion, const WalkConfig& walk,
                           const TrainConfig& train, int threads = 1);

struct RandomizedSvdConfig {
  std::size_t oversampling = 10;
  std::size_t power_iterations = 4;
  std::uint64_t seed = 0;
};

/// Rank-`dim` factor of the dense cosine similarity matrix S (unit diagonal
/// for nonzero rows), Z = U_d * sqrt(Sigma_d), computed by randomized SVD
/// without forming S. Each column's largest-magnitude entry of U is positive.
EmbeddingMatrix attrpure_embed(const SparseMatrix& attributes, std::size_t dim, const RandomizedSvdConfig& config = {});

}  // namespace abrw
