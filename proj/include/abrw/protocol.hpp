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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abrw/baselines.hpp"
#include "abrw/eval.hpp"
#include "abrw/graph.hpp"
#include "abrw/transition.hpp"

namespace abrw {

enum class Method { kAbrw, kDeepWalk, kAttrPure };

Method parse_method(std::string_view name);
std::string_view method_name(Method method);

/// Everything needed to embed a graph with one of the three methods.
struct EmbedSettings {
  Method method = Method::kAbrw;
  FusionConfig fusion;
  WalkConfig walk;
  TrainConfig train;
  int threads = 1;

  /// Copy with walk, training and SVD seeds derived from `seed`.
  EmbedSettings reseeded(std::uint64_t seed) const;
};

/// Dispatches to abrw_embed / deepwalk_embed / attrpure_embed. AttrPure uses
/// train.dim and walk.seed for its random projection.
EmbeddingMatrix embed(const AttributedGraph& graph, const EmbedSettings& settings);

/// Link-prediction ground truth: a fraction of links is held out as
/// positives with as many non-links of the original graph as negatives; the
/// embedding graph then keeps `preserved_fraction` of the remaining links.
struct LinkPredictionProtocol {
  double ground_truth_fraction = 0.1;
  double preserved_fraction = 1.0;
};

struct LinkPredictionSplit {
  AttributedGraph embedding_graph;
  std::vector<EdgeSample> samples;
};

LinkPredictionSplit make_link_prediction_split(const AttributedGraph& graph, const LinkPredictionProtocol& protocol,
                                               std::uint64_t seed);

/// Seed from which a run's walk, training and SVD seeds are derived.
std::uint64_t embedding_seed(std::uint64_t run_seed);

/// Split, embed, score: one seeded run.
LinkPredictionResult run_link_prediction(const AttributedGraph& graph, const EmbedSettings& settings,
                                         const LinkPredictionProtocol& protocol, std::uint64_t seed);

/// Remove links down to `preserved_fraction`, embed, classify.
ClassificationResult run_node_classification(const AttributedGraph& graph, const LabelSet& labels,
                                             const EmbedSettings& settings, double preserved_fraction,
                                             double train_fraction, std::uint64_t seed);

struct SweepCell {
  double alpha = 0.0;
  std::size_t top_k = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> aucs;

  double mean_auc() const;
};

/// Link-prediction AUC of ABRW for every (alpha, top_k) in the grid,
/// alpha-major, over the given seeds.
std::vector<SweepCell> run_sensitivity_sweep(const AttributedGraph& graph, std::span<const double> alphas,
                                             std::span<const std::size_t> top_ks, const EmbedSettings& base,
                                             const LinkPredictionProtocol& protocol,
                                             std::span<const std::uint64_t> seeds);

std::vector<MetricRow> sweep_rows(std::span<const SweepCell> cells);

}  // namespace abrw
