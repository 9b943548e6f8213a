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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "abrw/alias_table.hpp"
#include "abrw/graph.hpp"
#include "abrw/walker.hpp"

namespace abrw {

struct TrainConfig {
  std::size_t dim = 128;
  std::size_t window = 10;
  std::size_t negatives = 5;
  double ns_exponent = 0.75;
  std::size_t epochs = 5;
  double lr_initial = 0.025;
  double lr_final = 0.0001;
  std::uint64_t seed = 0;
  /// Single-threaded, fixed pair order. When false, `threads` workers update
  /// the shared matrices without locking.
  bool deterministic = true;
  int threads = 1;

  void validate() const;
};

struct NodePair {
  Index center;
  Index context;

  bool operator==(const NodePair&) const = default;
};

/// Skip-gram training pairs; multiplicity encodes co-occurrence counts.
struct PairCorpus {
  std::vector<NodePair> pairs;
  std::size_t num_nodes = 0;
};

/// Dense row-major n x d matrix of node vectors.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * dim_, dim_}; }
  double& operator()(std::size_t i, std::size_t k) noexcept { return data_[i * dim_ + k]; }
  double operator()(std::size_t i, std::size_t k) const noexcept { return data_[i * dim_ + k]; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool all_finite() const noexcept;

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Target (Z) and context (C) matrices of a trained model.
struct SgnsModel {
  EmbeddingMatrix target;
  EmbeddingMatrix context;
};

/// Negative-sampling distribution: token count raised to `exponent`,
/// normalized over the nodes that occur in the corpus.
class UnigramSampler {
 public:
  static UnigramSampler from_counts(std::span<const std::uint64_t> counts, double exponent);

  Index sample(Rng& rng) const { return table_.sample(rng); }
  /// 0 for nodes outside the support.
  double probability(Index node) const;
  std::span<const Index> support() const noexcept { return table_.support(); }
  std::size_t num_nodes() const noexcept { return probs_.size(); }

 private:
  AliasTable table_;
  std::vector<double> probs_;
};

/// Slides a length-`window` frame along every walk one step at a time; the
/// first node of each frame is the center and the other window-1 nodes are
/// its contexts. Walks shorter than the window form one truncated frame.
PairCorpus extract_pairs(const WalkCorpus& corpus, std::size_t window, std::size_t num_nodes);

UnigramSampler build_unigram_sampler(const WalkCorpus& corpus, std::size_t num_nodes, double ns_exponent);

namespace detail {

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

template <typename T>
T sigmoid(T x) {
  return x >= 0 ? T(1) / (T(1) + std::exp(-x)) : std::exp(x) / (T(1) + std::exp(x));
}

template <typename T>
T log_sigmoid(T x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace detail

/// log s(z.c) + sum_k log s(-z.c_k) for one (center, context) pair and its
/// sampled negatives. `negatives` holds m vectors of length d, row-major.
template <typename T>
T pair_objective(std::span<const T> z, std::span<const T> c, std::span<const T> negatives) {
  const std::size_t d = z.size();
  T value = detail::log_sigmoid(detail::dot(z, c));
  for (std::size_t off = 0; off + d <= negatives.size(); off += d) {
    value += detail::log_sigmoid(-detail::dot(z, negatives.subspan(off, d)));
  }
  return value;
}

template <typename T>
struct PairGradient {
  std::vector<T> center;     ///< d/dz
  std::vector<T> context;    ///< d/dc
  std::vector<T> negatives;  ///< d/dc_k, row-major m x d
};

template <typename T>
PairGradient<T> pair_gradient(std::span<const T> z, std::span<const T> c, std::span<const T> negatives) {
  const std::size_t d = z.size();
  PairGradient<T> g{std::vector<T>(d, T(0)), std::vector<T>(d), std::vector<T>(negatives.size())};
  const T pos = T(1) - detail::sigmoid(detail::dot(z, c));
  for (std::size_t k = 0; k < d; ++k) {
    g.center[k] += pos * c[k];
    g.context[k] = pos * z[k];
  }
  for (std::size_t off = 0; off + d <= negatives.size(); off += d) {
    const auto ck = negatives.subspan(off, d);
    const T neg = detail::sigmoid(detail::dot(z, ck));
    for (std::size_t k = 0; k < d; ++k) {
      g.center[k] -= neg * ck[k];
      g.negatives[off + k] = -neg * z[k];
    }
  }
  return g;
}

/// Stochastic gradient ascent on the SGNS objective. The learning rate decays
/// linearly from lr_initial to lr_final over epochs * |pairs| updates.
SgnsModel train_model(const PairCorpus& pairs, const UnigramSampler& sampler, const TrainConfig& config);

/// Target embeddings Z of train_model.
EmbeddingMatrix train(const PairCorpus& pairs, const UnigramSampler& sampler, const TrainConfig& config);

/// Mean pair objective of a model over `pairs`, negatives drawn with `seed`.
double mean_objective(const SgnsModel& model, const PairCorpus& pairs, const UnigramSampler& sampler,
                      std::size_t negatives, std::uint64_t seed);

/// Text layout: `n d`, then `id f1 ... fd` per row.
void write_embedding(std::ostream& out, const NodeIndex& nodes, const EmbeddingMatrix& z);

struct LoadedEmbedding {
  NodeIndex nodes;
  EmbeddingMatrix z;
};

LoadedEmbedding read_embedding(std::istream& in, const std::string& source = "<stream>");
LoadedEmbedding load_embedding(const std::filesystem::path& path);

}  // namespace abrw
