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

#include "abrw/protocol.hpp"

#include <numeric>

#include "abrw/error.hpp"
#include "abrw/rng.hpp"
#include "text_io.hpp"

namespace abrw {

namespace {
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kNegativeStream = 2;
constexpr std::uint64_t kPreserveStream = 3;
constexpr std::uint64_t kEmbedStream = 4;
constexpr std::uint64_t kClassifyStream = 5;
}  // namespace

Method parse_method(std::string_view name) {
  if (name == "abrw") return Method::kAbrw;
  if (name == "deepwalk") return Method::kDeepWalk;
  if (name == "attrpure") return Method::kAttrPure;
  throw InvalidArgument("unknown method '" + std::string(name) + "' (expected abrw, deepwalk or attrpure)");
}

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kAbrw:
      return "abrw";
    case Method::kDeepWalk:
      return "deepwalk";
    case Method::kAttrPure:
      return "attrpure";
  }
  return "?";
}

EmbedSettings EmbedSettings::reseeded(std::uint64_t seed) const {
  EmbedSettings out = *this;
  out.walk.seed = derive_seed(seed, 0x77616c6b);
  out.train.seed = derive_seed(seed, 0x7367);
  return out;
}

EmbeddingMatrix embed(const AttributedGraph& graph, const EmbedSettings& settings) {
  switch (settings.method) {
    case Method::kAbrw:
      if (!graph.has_attributes()) throw InvalidArgument("abrw needs node attributes");
      return abrw_embed(graph, settings.fusion, settings.walk, settings.train, settings.threads);
    case Method::kDeepWalk:
      return deepwalk_embed(graph.adjacency(), settings.walk, settings.train, settings.threads);
    case Method::kAttrPure: {
      if (!graph.has_attributes()) throw InvalidArgument("attrpure needs node attributes");
      RandomizedSvdConfig svd;
      svd.seed = settings.walk.seed;
      return attrpure_embed(graph.attributes(), settings.train.dim, svd);
    }
  }
  throw InvalidArgument("unknown method");
}

LinkPredictionSplit make_link_prediction_split(const AttributedGraph& graph, const LinkPredictionProtocol& protocol,
                                               std::uint64_t seed) {
  auto held_out = remove_links(graph, protocol.ground_truth_fraction, derive_seed(seed, kSplitStream));
  auto negatives = sample_negative_edges(graph, held_out.removed.size(), derive_seed(seed, kNegativeStream));
  auto kept = remove_links(held_out.graph, 1.0 - protocol.preserved_fraction, derive_seed(seed, kPreserveStream));

  LinkPredictionSplit split{std::move(kept.graph), std::move(held_out.removed)};
  split.samples.insert(split.samples.end(), negatives.begin(), negatives.end());
  return split;
}

std::uint64_t embedding_seed(std::uint64_t run_seed) { return derive_seed(run_seed, kEmbedStream); }

LinkPredictionResult run_link_prediction(const AttributedGraph& graph, const EmbedSettings& settings,
                                         const LinkPredictionProtocol& protocol, std::uint64_t seed) {
  const auto split = make_link_prediction_split(graph, protocol, seed);
  const auto z = embed(split.embedding_graph, settings.reseeded(embedding_seed(seed)));
  return link_prediction_auc(z, split.samples);
}

ClassificationResult run_node_classification(const AttributedGraph& graph, const LabelSet& labels,
                                             const EmbedSettings& settings, double preserved_fraction,
                                             double train_fraction, std::uint64_t seed) {
  const auto kept = remove_links(graph, 1.0 - preserved_fraction, derive_seed(seed, kPreserveStream));
  const auto z = embed(kept.graph, settings.reseeded(embedding_seed(seed)));
  return node_classification(z, labels, train_fraction, derive_seed(seed, kClassifyStream));
}

double SweepCell::mean_auc() const {
  if (aucs.empty()) return 0.0;
  return std::accumulate(aucs.begin(), aucs.end(), 0.0) / static_cast<double>(aucs.size());
}

std::vector<SweepCell> run_sensitivity_sweep(const AttributedGraph& graph, std::span<const double> alphas,
                                             std::span<const std::size_t> top_ks, const EmbedSettings& base,
                                             const LinkPredictionProtocol& protocol,
                                             std::span<const std::uint64_t> seeds) {
  if (alphas.empty() || top_ks.empty() || seeds.empty()) throw InvalidArgument("sweep grid and seeds must be nonempty");
  std::vector<SweepCell> cells;
  for (double alpha : alphas) {
    for (std::size_t k : top_ks) {
      EmbedSettings settings = base;
      settings.method = Method::kAbrw;
      settings.fusion.alpha = alpha;
      settings.fusion.top_k = k;
      settings.fusion.validate();
      SweepCell cell{alpha, k, {seeds.begin(), seeds.end()}, {}};
      for (auto seed : seeds) cell.aucs.push_back(run_link_prediction(graph, settings, protocol, seed).auc);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<MetricRow> sweep_rows(std::span<const SweepCell> cells) {
  std::vector<MetricRow> rows;
  for (const auto& c : cells) {
    const std::string setting = "alpha=" + detail::format_real(c.alpha) + ";topk=" + std::to_string(c.top_k);
    for (std::size_t s = 0; s < c.aucs.size(); ++s) rows.push_back({setting, std::to_string(c.seeds[s]), "auc", c.aucs[s]});
  }
  return rows;
}

}  // namespace abrw
