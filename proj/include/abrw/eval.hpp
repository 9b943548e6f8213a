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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "abrw/graph.hpp"
#include "abrw/sgns.hpp"

namespace abrw {

// --- link prediction -----------------------------------------------------

struct LinkPredictionResult {
  double auc = 0.0;
  std::size_t num_positives = 0;
  std::size_t num_negatives = 0;
};

/// Cosine similarity of two embedding rows; 0 if either row is zero.
double score_edge(const EmbeddingMatrix& z, Index i, Index j);

/// Mann-Whitney AUC: fraction of (positive, negative) pairs ordered
/// correctly, ties counting one half.
double auc_from_scores(std::span<const double> positives, std::span<const double> negatives);

LinkPredictionResult link_prediction_auc(const EmbeddingMatrix& z, std::span<const EdgeSample> samples);

// --- node classification -------------------------------------------------

struct LogisticRegressionConfig {
  double l2 = 1.0;
  std::size_t max_iterations = 500;
  double gradient_tolerance = 1e-6;
};

/// Binary L2-regularized logistic regression, full-batch gradient descent
/// with backtracking (Armijo) line search. The bias is not regularized.
struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  /// Objective value before the first step and after every accepted step.
  std::vector<double> loss_history;

  double decision(std::span<const double> x) const;
};

/// Rows of `features` selected by `rows`, with targets in {0, 1}.
LogisticModel fit_logistic(const EmbeddingMatrix& features, std::span<const Index> rows,
                           std::span<const std::uint8_t> targets, const LogisticRegressionConfig& config = {});

struct ClassificationResult {
  /// Equals accuracy for single-label multiclass data.
  double micro_f1 = 0.0;
  double train_fraction = 0.0;
  std::size_t num_train = 0;
  std::size_t num_test = 0;
  std::map<std::string, std::size_t> train_counts;
  std::map<std::string, std::size_t> test_counts;
  std::map<std::string, std::size_t> correct_counts;
  /// Classes absent from the training split, among other diagnostics.
  std::vector<std::string> warnings;
};

/// Seeded train/test split of the labeled nodes, one-vs-rest logistic
/// regression, argmax prediction, micro-F1 on the held-out part.
ClassificationResult node_classification(const EmbeddingMatrix& z, const LabelSet& labels, double train_fraction,
                                         std::uint64_t seed, const LogisticRegressionConfig& config = {});

// --- visualization -------------------------------------------------------

struct PcaResult {
  EmbeddingMatrix coordinates;  ///< n x 2
  std::array<double, 2> explained_variance{};
};

/// Projection of the mean-centered rows onto the top two principal axes.
/// Each axis is oriented so its largest-magnitude entry is positive.
PcaResult pca_2d(const EmbeddingMatrix& z);

/// `id x y label` per node; unlabeled nodes get `-`.
void write_coordinates(std::ostream& out, const NodeIndex& nodes, const EmbeddingMatrix& coordinates,
                       const LabelSet& labels);

// --- reporting -----------------------------------------------------------

struct MetricRow {
  std::string setting;
  std::string seed;
  std::string metric;
  double value = 0.0;
};

/// `setting,seed,metric,value` rows followed by one `mean` row per
/// (setting, metric), in first-appearance order.
void write_metrics_csv(std::ostream& out, std::span<const MetricRow> rows);

}  // namespace abrw
