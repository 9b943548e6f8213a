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

#include "abrw/eval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "abrw/error.hpp"
#include "abrw/rng.hpp"
#include "text_io.hpp"

namespace abrw {

double score_edge(const EmbeddingMatrix& z, Index i, Index j) {
  if (i >= z.rows() || j >= z.rows()) throw InvalidArgument("node index out of range");
  const auto a = z.row(i);
  const auto b = z.row(j);
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double auc_from_scores(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) throw InvalidArgument("AUC needs positive and negative samples");
  struct Scored {
    double score;
    bool positive;
  };
  std::vector<Scored> all;
  all.reserve(positives.size() + negatives.size());
  for (double s : positives) all.push_back({s, true});
  for (double s : negatives) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });

  // Sum of 1-based midranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].positive) rank_sum += midrank;
    }
    i = j;
  }
  const auto np = static_cast<double>(positives.size());
  const auto nn = static_cast<double>(negatives.size());
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

LinkPredictionResult link_prediction_auc(const EmbeddingMatrix& z, std::span<const EdgeSample> samples) {
  std::vector<double> pos;
  std::vector<double> neg;
  for (const auto& s : samples) {
    (s.polarity == Polarity::kPositive ? pos : neg).push_back(score_edge(z, s.src, s.dst));
  }
  if (pos.empty() || neg.empty()) throw InvalidArgument("link prediction needs both positive and negative samples");
  return {auc_from_scores(pos, neg), pos.size(), neg.size()};
}

// --- logistic regression -------------------------------------------------

double LogisticModel::decision(std::span<const double> x) const {
  double s = bias;
  for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * x[k];
  return s;
}

namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct LogisticProblem {
  const EmbeddingMatrix& features;
  std::span<const Index> rows;
  std::span<const std::uint8_t> targets;
  double l2;

  // Objective sum_i log(1 + exp(-y_i m_i)) + l2/2 |w|^2 with y in {-1, +1};
  // `params` is w followed by the bias.
  double loss(std::span<const double> params, std::span<double> grad) const {
    const std::size_t d = features.dim();
    std::fill(grad.begin(), grad.end(), 0.0);
    double value = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto x = features.row(rows[r]);
      double margin = params[d];
      for (std::size_t k = 0; k < d; ++k) margin += params[k] * x[k];
      const double y = targets[r] ? 1.0 : -1.0;
      value += softplus(-y * margin);
      // d/dm log(1 + exp(-y m)) = -y * sigmoid(-y m)
      const double t = -y * margin;
      const double coeff = -y * (t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)));
      for (std::size_t k = 0; k < d; ++k) grad[k] += coeff * x[k];
      grad[d] += coeff;
    }
    for (std::size_t k = 0; k < d; ++k) {
      value += 0.5 * l2 * params[k] * params[k];
      grad[k] += l2 * params[k];
    }
    return value;
  }
};

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

LogisticModel fit_logistic(const EmbeddingMatrix& features, std::span<const Index> rows,
                           std::span<const std::uint8_t> targets, const LogisticRegressionConfig& config) {
  if (rows.size() != targets.size()) throw InvalidArgument("rows and targets differ in length");
  const std::size_t d = features.dim();
  const LogisticProblem problem{features, rows, targets, config.l2};

  std::vector<double> params(d + 1, 0.0);
  std::vector<double> grad(d + 1);
  std::vector<double> trial(d + 1);
  std::vector<double> trial_grad(d + 1);
  std::vector<double> prev_params;
  std::vector<double> prev_grad;

  LogisticModel model;
  double value = problem.loss(params, grad);
  model.loss_history.push_back(value);
  double step = 1.0;
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    const double gnorm = norm2(grad);
    if (gnorm <= config.gradient_tolerance) break;
    // Barzilai-Borwein guess for the initial trial step, then backtracking.
    if (!prev_params.empty()) {
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t k = 0; k <= d; ++k) {
        const double s = params[k] - prev_params[k];
        const double y = grad[k] - prev_grad[k];
        ss += s * s;
        sy += s * y;
      }
      if (sy > 0.0) step = ss / sy;
    } else {
      step = 1.0 / std::max(1.0, gnorm);
    }
    bool accepted = false;
    for (int shrink = 0; shrink < 60; ++shrink) {
      for (std::size_t k = 0; k <= d; ++k) trial[k] = params[k] - step * grad[k];
      const double trial_value = problem.loss(trial, trial_grad);
      if (trial_value <= value - 1e-4 * step * gnorm * gnorm) {
        prev_params = params;
        prev_grad = grad;
        params.swap(trial);
        grad.swap(trial_grad);
        value = trial_value;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    model.loss_history.push_back(value);
  }
  model.weights.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(d));
  model.bias = params[d];
  return model;
}

ClassificationResult node_classification(const EmbeddingMatrix& z, const LabelSet& labels, double train_fraction,
                                         std::uint64_t seed, const LogisticRegressionConfig& config) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidArgument("train fraction must lie in (0, 1)");
  std::vector<std::string> classes;
  for (const auto& [node, label] : labels) {
    if (node >= z.rows()) throw InvalidArgument("labeled node outside the embedding");
    classes.push_back(label);
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) throw InvalidArgument("node classification needs at least two classes");

  std::vector<Index> nodes;
  for (const auto& [node, label] : labels) nodes.push_back(node);
  Rng rng(derive_seed(seed, 0x73706c6974));
  rng.shuffle(nodes);
  auto num_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(nodes.size())));
  num_train = std::clamp<std::size_t>(num_train, 1, nodes.size() - 1);
  std::vector<Index> train_nodes(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(num_train));
  std::vector<Index> test_nodes(nodes.begin() + static_cast<std::ptrdiff_t>(num_train), nodes.end());
  std::sort(train_nodes.begin(), train_nodes.end());
  std::sort(test_nodes.begin(), test_nodes.end());

  ClassificationResult result;
  result.train_fraction = train_fraction;
  result.num_train = train_nodes.size();
  result.num_test = test_nodes.size();
  for (Index v : train_nodes) ++result.train_counts[labels.at(v)];
  for (Index v : test_nodes) ++result.test_counts[labels.at(v)];

  std::vector<LogisticModel> models;
  std::vector<std::string> learned;
  std::vector<std::uint8_t> targets(train_nodes.size());
  for (const auto& c : classes) {
    if (!result.train_counts.contains(c)) {
      result.warnings.push_back("class '" + c + "' has no training nodes; its test nodes count as errors");
      continue;
    }
    for (std::size_t r = 0; r < train_nodes.size(); ++r) targets[r] = labels.at(train_nodes[r]) == c ? 1 : 0;
    models.push_back(fit_logistic(z, train_nodes, targets, config));
    learned.push_back(c);
  }

  std::size_t correct = 0;
  for (Index v : test_nodes) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < models.size(); ++c) {
      const double s = models[c].decision(z.row(v));
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    if (learned[best] == labels.at(v)) {
      ++correct;
      ++result.correct_counts[learned[best]];
    }
  }
  result.micro_f1 = static_cast<double>(correct) / static_cast<double>(test_nodes.size());
  return result;
}

// --- visualization -------------------------------------------------------

PcaResult pca_2d(const EmbeddingMatrix& z) {
  const std::size_t n = z.rows();
  const std::size_t d = z.dim();
  if (n < 2) throw InvalidArgument("PCA needs at least two points");
  Eigen::MatrixXd centered(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) centered(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = z(i, k);
  }
  centered.rowwise() -= centered.colwise().mean();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::MatrixXd axes = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), 2);
  PcaResult out{EmbeddingMatrix(n, 2), {0.0, 0.0}};
  for (Eigen::Index c = 0; c < 2 && c < sv.size(); ++c) {
    Eigen::VectorXd axis = svd.matrixV().col(c);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    axes.col(c) = axis;
    out.explained_variance[static_cast<std::size_t>(c)] = sv(c) * sv(c) / static_cast<double>(n - 1);
  }
  const Eigen::MatrixXd projected = centered * axes;
  for (std::size_t i = 0; i < n; ++i) {
    out.coordinates(i, 0) = projected(static_cast<Eigen::Index>(i), 0);
    out.coordinates(i, 1) = projected(static_cast<Eigen::Index>(i), 1);
  }
  return out;
}

void write_coordinates(std::ostream& out, const NodeIndex& nodes, const EmbeddingMatrix& coordinates,
                       const LabelSet& labels) {
  for (std::size_t i = 0; i < coordinates.rows(); ++i) {
    const auto it = labels.find(static_cast<Index>(i));
    out << nodes.id(static_cast<Index>(i)) << ' ' << detail::format_real(coordinates(i, 0)) << ' '
        << detail::format_real(coordinates(i, 1)) << ' ' << (it == labels.end() ? "-" : it->second) << '\n';
  }
}

// --- reporting -----------------------------------------------------------

void write_metrics_csv(std::ostream& out, std::span<const MetricRow> rows) {
  out << "setting,seed,metric,value\n";
  struct Accumulator {
    std::string setting;
    std::string metric;
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::vector<Accumulator> means;
  for (const auto& r : rows) {
    out << r.setting << ',' << r.seed << ',' << r.metric << ',' << detail::format_real(r.value) << '\n';
    auto it = std::find_if(means.begin(), means.end(),
                           [&](const Accumulator& a) { return a.setting == r.setting && a.metric == r.metric; });
    if (it == means.end()) {
      means.push_back({r.setting, r.metric});
      it = std::prev(means.end());
    }
    it->sum += r.value;
    ++it->count;
  }
  for (const auto& m : means) {
    out << m.setting << ",mean," << m.metric << ',' << detail::format_real(m.sum / static_cast<double>(m.count)) << '\n';
  }
}

}  // namespace abrw
