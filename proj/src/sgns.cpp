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

#include "abrw/sgns.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "abrw/error.hpp"
#include "abrw/rng.hpp"
#include "text_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace abrw {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kShuffleStream = 0x73687566;
constexpr std::uint64_t kNegativeStream = 0x6e656773;

// One SGD ascent step for a (center, context) pair plus m sampled negatives.
// `scratch` has length d. The simd reduction order is fixed per build, so
// results stay bit-reproducible for a given binary.
void ascend_pair(float* __restrict z, float* __restrict contexts, std::size_t d, Index context, std::size_t m,
                 const UnigramSampler& sampler, Rng& rng, float lr, float* __restrict scratch) {
  std::fill(scratch, scratch + d, 0.0f);
  for (std::size_t s = 0; s <= m; ++s) {
    const Index target = s == 0 ? context : sampler.sample(rng);
    const float label = s == 0 ? 1.0f : 0.0f;
    float* __restrict c = contexts + static_cast<std::size_t>(target) * d;
    float f = 0.0f;
#pragma omp simd reduction(+ : f)
    for (std::size_t k = 0; k < d; ++k) f += z[k] * c[k];
    const float g = (label - detail::sigmoid(f)) * lr;
#pragma omp simd
    for (std::size_t k = 0; k < d; ++k) {
      scratch[k] += g * c[k];
      c[k] += g * z[k];
    }
  }
#pragma omp simd
  for (std::size_t k = 0; k < d; ++k) z[k] += scratch[k];
}

EmbeddingMatrix to_matrix(const std::vector<float>& values, std::size_t rows, std::size_t dim) {
  EmbeddingMatrix out(rows, dim);
  std::copy(values.begin(), values.end(), out.data().begin());
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  if (window < 2) throw InvalidArgument("window must be >= 2");
  if (!(lr_initial > 0.0) || !(lr_final > 0.0)) throw InvalidArgument("learning rates must be positive");
  if (lr_final > lr_initial) throw InvalidArgument("lr_final must not exceed lr_initial");
  if (!deterministic && threads < 1) throw InvalidArgument("threads must be >= 1");
}

bool EmbeddingMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

UnigramSampler UnigramSampler::from_counts(std::span<const std::uint64_t> counts, double exponent) {
  std::vector<Index> support;
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    support.push_back(static_cast<Index>(i));
    weights.push_back(std::pow(static_cast<double>(counts[i]), exponent));
    total += weights.back();
  }
  if (support.empty()) throw InvalidArgument("unigram sampler needs a nonempty corpus");
  UnigramSampler s;
  s.probs_.assign(counts.size(), 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) {
    weights[k] /= total;
    s.probs_[support[k]] = weights[k];
  }
  s.table_ = AliasTable::build(support, weights);
  return s;
}

double UnigramSampler::probability(Index node) const { return node < probs_.size() ? probs_[node] : 0.0; }

PairCorpus extract_pairs(const WalkCorpus& corpus, std::size_t window, std::size_t num_nodes) {
  if (window < 2) throw InvalidArgument("window must be >= 2");
  std::size_t total = 0;
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    const std::size_t len = corpus.walk(w).size();
    total += len >= window ? (len - window + 1) * (window - 1) : (len > 0 ? len - 1 : 0);
  }
  PairCorpus out;
  out.num_nodes = num_nodes;
  out.pairs.reserve(total);
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    const auto walk = corpus.walk(w);
    if (walk.size() < 2) continue;
    const std::size_t frames = walk.size() >= window ? walk.size() - window + 1 : 1;
    const std::size_t span = std::min(window, walk.size());
    for (std::size_t start = 0; start < frames; ++start) {
      for (std::size_t o = 1; o < span; ++o) out.pairs.push_back({walk[start], walk[start + o]});
    }
  }
  return out;
}

UnigramSampler build_unigram_sampler(const WalkCorpus& corpus, std::size_t num_nodes, double ns_exponent) {
  std::vector<std::uint64_t> counts(num_nodes, 0);
  for (Index t : corpus.tokens()) {
    if (t >= num_nodes) throw InvalidArgument("corpus token out of range");
    ++counts[t];
  }
  return UnigramSampler::from_counts(counts, ns_exponent);
}

SgnsModel train_model(const PairCorpus& pairs, const UnigramSampler& sampler, const TrainConfig& config) {
  config.validate();
  const std::size_t n = pairs.num_nodes;
  const std::size_t d = config.dim;
  std::vector<float> z(n * d);
  std::vector<float> c(n * d, 0.0f);
  {
    Rng rng(derive_seed(config.seed, kInitStream));
    const double half = 0.5 / static_cast<double>(d);
    for (float& v : z) v = static_cast<float>(rng.uniform(-half, half));
  }
  if (config.epochs > 0 && pairs.pairs.empty()) throw InvalidArgument("cannot train on an empty pair corpus");
  for (const auto& p : pairs.pairs) {
    if (p.center >= n || p.context >= n) throw InvalidArgument("pair index out of range");
  }

  const std::size_t per_epoch = pairs.pairs.size();
  const double total = static_cast<double>(per_epoch) * static_cast<double>(config.epochs);
  const double lr_span = config.lr_initial - config.lr_final;
  std::vector<NodePair> order = pairs.pairs;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng shuffler(derive_seed(config.seed, kShuffleStream, epoch));
    shuffler.shuffle(order);
    const double done_before = static_cast<double>(epoch) * static_cast<double>(per_epoch);

    if (config.deterministic || config.threads <= 1) {
      Rng rng(derive_seed(config.seed, kNegativeStream, epoch));
      std::vector<float> scratch(d);
      for (std::size_t t = 0; t < per_epoch; ++t) {
        const auto lr = static_cast<float>(config.lr_initial - lr_span * (done_before + static_cast<double>(t)) / total);
        const auto& p = order[t];
        ascend_pair(z.data() + static_cast<std::size_t>(p.center) * d, c.data(), d, p.context, config.negatives,
                    sampler, rng, lr, scratch.data());
      }
    } else {
#ifdef _OPENMP
#pragma omp parallel num_threads(config.threads)
      {
        const auto workers = static_cast<std::size_t>(omp_get_num_threads());
        const auto id = static_cast<std::size_t>(omp_get_thread_num());
#else
      {
        const std::size_t workers = 1;
        const std::size_t id = 0;
#endif
        const std::size_t begin = per_epoch * id / workers;
        const std::size_t end = per_epoch * (id + 1) / workers;
        Rng rng(derive_seed(config.seed, kNegativeStream, epoch, id + 1));
        std::vector<float> scratch(d);
        for (std::size_t t = begin; t < end; ++t) {
          // Workers advance in lockstep on average, so local progress scaled
          // by the worker count approximates global progress.
          const double progress = done_before + static_cast<double>(t - begin) * static_cast<double>(workers);
          const auto lr = static_cast<float>(config.lr_initial - lr_span * std::min(progress / total, 1.0));
          const auto& p = order[t];
          ascend_pair(z.data() + static_cast<std::size_t>(p.center) * d, c.data(), d, p.context, config.negatives,
                      sampler, rng, lr, scratch.data());
        }
      }
    }
  }
  return {to_matrix(z, n, d), to_matrix(c, n, d)};
}

EmbeddingMatrix train(const PairCorpus& pairs, const UnigramSampler& sampler, const TrainConfig& config) {
  return train_model(pairs, sampler, config).target;
}

double mean_objective(const SgnsModel& model, const PairCorpus& pairs, const UnigramSampler& sampler,
                      std::size_t negatives, std::uint64_t seed) {
  if (pairs.pairs.empty()) return 0.0;
  const std::size_t d = model.target.dim();
  Rng rng(seed);
  std::vector<double> neg(negatives * d);
  double sum = 0.0;
  for (const auto& p : pairs.pairs) {
    for (std::size_t s = 0; s < negatives; ++s) {
      const auto row = model.context.row(sampler.sample(rng));
      std::copy(row.begin(), row.end(), neg.begin() + static_cast<std::ptrdiff_t>(s * d));
    }
    sum += pair_objective<double>(model.target.row(p.center), model.context.row(p.context), neg);
  }
  return sum / static_cast<double>(pairs.pairs.size());
}

void write_embedding(std::ostream& out, const NodeIndex& nodes, const EmbeddingMatrix& z) {
  if (nodes.size() != z.rows()) throw InvalidArgument("node count does not match embedding rows");
  out << z.rows() << ' ' << z.dim() << '\n';
  for (std::size_t i = 0; i < z.rows(); ++i) {
    out << nodes.id(static_cast<Index>(i));
    for (double v : z.row(i)) out << ' ' << detail::format_real(v);
    out << '\n';
  }
}

LoadedEmbedding read_embedding(std::istream& in, const std::string& source) {
  detail::LineReader reader(in);
  std::string line;
  std::vector<std::string_view> header;
  while (header.empty() && reader.next(line)) header = detail::tokenize(line);
  const auto rows = header.size() == 2 ? detail::parse_uint(header[0]) : std::nullopt;
  const auto dim = header.size() == 2 ? detail::parse_uint(header[1]) : std::nullopt;
  if (!rows || !dim) throw ParseError(source, reader.line_no(), "expected header 'n d'");

  LoadedEmbedding out{NodeIndex{}, EmbeddingMatrix(*rows, *dim)};
  std::size_t row = 0;
  while (reader.next(line)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (row == *rows) throw ParseError(source, reader.line_no(), "more rows than declared");
    if (tokens.size() != *dim + 1) throw ParseError(source, reader.line_no(), "expected id and " + std::to_string(*dim) + " values");
    if (out.nodes.find(tokens[0])) throw ParseError(source, reader.line_no(), "duplicate id '" + std::string(tokens[0]) + "'");
    out.nodes.intern(tokens[0]);
    for (std::size_t k = 0; k < *dim; ++k) {
      const auto v = detail::parse_double(tokens[k + 1]);
      if (!v) throw ParseError(source, reader.line_no(), "non-numeric value '" + std::string(tokens[k + 1]) + "'");
      out.z(row, k) = *v;
    }
    ++row;
  }
  if (row != *rows) throw ParseError(source, reader.line_no(), "fewer rows than declared");
  return out;
}

LoadedEmbedding load_embedding(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_embedding(in, path.string());
}

}  // namespace abrw
