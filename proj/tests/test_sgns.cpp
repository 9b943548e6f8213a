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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "abrw/error.hpp"
#include "abrw/graph.hpp"
#include "abrw/rng.hpp"
#include "abrw/sgns.hpp"
#include "abrw/transition.hpp"
#include "abrw/walker.hpp"
#include "support/synthetic.hpp"

namespace abrw {
namespace {

WalkCorpus corpus_of(std::initializer_list<std::vector<Index>> walks) {
  WalkCorpus c;
  for (const auto& w : walks) c.append(w);
  return c;
}

// Independent scalar oracle for the pair objective.
double scalar_objective(const std::vector<double>& z, const std::vector<double>& c,
                        const std::vector<std::vector<double>>& negs) {
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  };
  double v = std::log(1.0 / (1.0 + std::exp(-dot(z, c))));
  for (const auto& n : negs) v += std::log(1.0 / (1.0 + std::exp(dot(z, n))));
  return v;
}

std::vector<double> random_vector(Rng& rng, std::size_t d, double scale) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

TEST(Pairs, ThreeNodeWalkWindowTwo) {
  const auto pairs = extract_pairs(corpus_of({{0, 1, 2}}), 2, 3);
  EXPECT_EQ(pairs.pairs, (std::vector<NodePair>{{0, 1}, {1, 2}}));
}

TEST(Pairs, WindowFramesCenterOnFirstNode) {
  const auto pairs = extract_pairs(corpus_of({{0, 1, 2, 3}}), 3, 4);
  EXPECT_EQ(pairs.pairs, (std::vector<NodePair>{{0, 1}, {0, 2}, {1, 2}, {1, 3}}));
}

TEST(Pairs, ShortWalks) {
  EXPECT_TRUE(extract_pairs(corpus_of({{4}}), 10, 5).pairs.empty());
  EXPECT_EQ(extract_pairs(corpus_of({{0, 1, 2}}), 10, 3).pairs, (std::vector<NodePair>{{0, 1}, {0, 2}}));
  EXPECT_THROW(extract_pairs(corpus_of({{0, 1}}), 1, 2), InvalidArgument);
}

TEST(Pairs, CorpusCountMatchesSimulation) {
  const auto g = testing::random_graph({.nodes = 100, .link_probability = 0.05, .allow_isolated = false}, 12);
  const auto corpus = generate_walks(row_normalize(g.adjacency()), {10, 80, 3});
  ASSERT_EQ(corpus.size(), 1000u);
  ASSERT_EQ(corpus.truncated_walks(), 0u);
  // Count by direct simulation of the sliding window.
  std::size_t simulated = 0;
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    const auto walk = corpus.walk(w);
    for (std::size_t start = 0; start + 10 <= walk.size(); ++start) {
      for (std::size_t o = 1; o < 10; ++o) ++simulated;
    }
  }
  const auto pairs = extract_pairs(corpus, 10, 100);
  EXPECT_EQ(simulated, 639'000u);
  EXPECT_EQ(pairs.pairs.size(), simulated);
  EXPECT_EQ(pairs.pairs.size(), 10u * 100u * (80u - 10u + 1u) * (10u - 1u));
}

TEST(Unigram, ThreeToOne) {
  const std::vector<std::uint64_t> counts{3, 1};
  const auto s = UnigramSampler::from_counts(counts, 0.75);
  const double expected = std::pow(3.0, 0.75) / (std::pow(3.0, 0.75) + 1.0);
  EXPECT_NEAR(s.probability(0), expected, 1e-15);
  EXPECT_NEAR(s.probability(0), 0.695076, 1e-6);
  EXPECT_NEAR(s.probability(1), 0.304924, 1e-6);
}

TEST(Unigram, SymmetricAndUniformCases) {
  const std::vector<std::uint64_t> equal{5, 5};
  for (double e : {0.0, 0.5, 0.75, 1.0, 2.0}) {
    const auto s = UnigramSampler::from_counts(equal, e);
    EXPECT_DOUBLE_EQ(s.probability(0), 0.5);
  }
  const std::vector<std::uint64_t> skewed{1, 0, 100, 7};
  const auto u = UnigramSampler::from_counts(skewed, 0.0);
  EXPECT_DOUBLE_EQ(u.probability(0), 1.0 / 3.0);
  EXPECT_EQ(u.probability(1), 0.0);
  EXPECT_DOUBLE_EQ(u.probability(2), 1.0 / 3.0);
  EXPECT_EQ(u.support().size(), 3u);
}

TEST(Unigram, NeverSamplesAbsentNodes) {
  const auto s = build_unigram_sampler(corpus_of({{0, 2, 0}, {2}}), 4, 0.75);
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const auto v = s.sample(rng);
    ASSERT_TRUE(v == 0 || v == 2);
  }
}

TEST(Objective, ZeroDotProducts) {
  const std::vector<double> z(4, 0.0), c{1, 2, 3, 4}, negs(5 * 4, 1.0);
  EXPECT_NEAR(pair_objective<double>(z, c, negs), 6.0 * std::log(0.5), 1e-12);
  EXPECT_NEAR(pair_objective<double>(z, c, negs), -4.158883, 1e-6);
}

TEST(Objective, SaturatesToZeroFromBelow) {
  const std::vector<double> z{10, 10}, c{10, 10};
  const double v = pair_objective<double>(z, c, {});
  EXPECT_LT(v, 0.0);
  EXPECT_GT(v, -1e-80);
  const std::vector<double> far{1e3, 1e3};
  EXPECT_LE(pair_objective<double>(far, far, {}), 0.0);
  EXPECT_TRUE(std::isfinite(pair_objective<double>(far, std::vector<double>{-1e3, -1e3}, {})));
}

TEST(Objective, MatchesScalarOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto z = random_vector(rng, 4, 1.5), c = random_vector(rng, 4, 1.5);
    const std::vector<std::vector<double>> negs{random_vector(rng, 4, 1.5), random_vector(rng, 4, 1.5)};
    std::vector<double> flat;
    for (const auto& n : negs) flat.insert(flat.end(), n.begin(), n.end());
    EXPECT_NEAR(pair_objective<double>(z, c, flat), scalar_objective(z, c, negs), 1e-12);
  }
}

TEST(Gradient, ZeroCenterGivesZeroContextGradient) {
  const std::vector<double> z(3, 0.0), c{1, 2, 3}, negs{4, 5, 6};
  const auto g = pair_gradient<double>(z, c, negs);
  for (double v : g.context) EXPECT_EQ(v, 0.0);
  for (double v : g.negatives) EXPECT_EQ(v, 0.0);
}

TEST(Gradient, PositiveEqualsNegativeCancels) {
  const std::vector<double> z{1, -1, 0}, c{1, 1, 5};
  ASSERT_EQ(z[0] * c[0] + z[1] * c[1] + z[2] * c[2], 0.0);
  const auto g = pair_gradient<double>(z, c, c);
  for (double v : g.center) EXPECT_EQ(v, 0.0);
}

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
}

TEST(Gradient, MatchesCentralDifferences) {
  Rng rng(2024);
  constexpr double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng.below(16);
    const std::size_t m = rng.below(6);
    auto z = random_vector(rng, d, 1.0);
    auto c = random_vector(rng, d, 1.0);
    auto negs = random_vector(rng, d * m, 1.0);
    const auto g = pair_gradient<double>(z, c, negs);
    auto check = [&](std::vector<double>& v, const std::vector<double>& analytic) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        const double saved = v[k];
        v[k] = saved + h;
        const double up = pair_objective<double>(z, c, negs);
        v[k] = saved - h;
        const double down = pair_objective<double>(z, c, negs);
        v[k] = saved;
        EXPECT_LE(relative_error(analytic[k], (up - down) / (2 * h)), 1e-4);
      }
    };
    check(z, g.center);
    check(c, g.context);
    check(negs, g.negatives);
  }
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.window = 5;
  cfg.negatives = 3;
  cfg.epochs = 3;
  cfg.seed = 9;
  return cfg;
}

TEST(Train, ObjectiveIncreasesOverEpochs) {
  const auto g = testing::planted_partition({.classes = 3, .nodes_per_class = 30}, 1);
  const auto corpus = generate_walks(row_normalize(g.graph.adjacency()), {5, 20, 1});
  const auto pairs = extract_pairs(corpus, 5, g.graph.num_nodes());
  const auto sampler = build_unigram_sampler(corpus, g.graph.num_nodes(), 0.75);
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t epochs : {0u, 1u, 3u}) {
    auto cfg = small_config();
    cfg.epochs = epochs;
    const double obj = mean_objective(train_model(pairs, sampler, cfg), pairs, sampler, 3, 77);
    EXPECT_GT(obj, previous) << epochs << " epochs";
    previous = obj;
  }
}

TEST(Train, RepeatedPairIsLearned) {
  PairCorpus pairs{std::vector<NodePair>(200, NodePair{0, 1}), 2};
  const std::vector<std::uint64_t> counts{200, 200};
  const auto sampler = UnigramSampler::from_counts(counts, 0.75);
  auto cfg = small_config();
  cfg.negatives = 0;
  cfg.epochs = 50;
  cfg.lr_initial = 0.1;
  const auto model = train_model(pairs, sampler, cfg);
  const double f = detail::dot<double>(model.target.row(0), model.context.row(1));
  EXPECT_GT(detail::sigmoid(f), 0.9);
}

TEST(Train, ZeroEpochsReturnsInitialization) {
  PairCorpus pairs{{{0, 1}, {1, 2}}, 3};
  const std::vector<std::uint64_t> counts{1, 2, 1};
  const auto sampler = UnigramSampler::from_counts(counts, 0.75);
  auto cfg = small_config();
  cfg.epochs = 0;
  const auto model = train_model(pairs, sampler, cfg);
  const double half = 0.5 / 16.0;
  for (double v : model.target.data()) {
    EXPECT_LE(std::abs(v), half);
  }
  for (double v : model.context.data()) EXPECT_EQ(v, 0.0);
  cfg.epochs = 1;
  EXPECT_NE(train(pairs, sampler, cfg), model.target);
}

TEST(Train, DeterministicModeIsBitReproducible) {
  const auto g = testing::random_graph({.nodes = 50, .link_probability = 0.1}, 3);
  const auto corpus = generate_walks(row_normalize(g.adjacency()), {3, 15, 2});
  const auto pairs = extract_pairs(corpus, 5, 50);
  const auto sampler = build_unigram_sampler(corpus, 50, 0.75);
  const auto cfg = small_config();
  const auto a = train(pairs, sampler, cfg);
  EXPECT_EQ(a, train(pairs, sampler, cfg));
  auto other = cfg;
  other.seed = 10;
  EXPECT_NE(a, train(pairs, sampler, other));
  EXPECT_TRUE(a.all_finite());
}

TEST(Train, ParallelModeProducesFiniteEmbeddings) {
  const auto g = testing::random_graph({.nodes = 80, .link_probability = 0.1}, 3);
  const auto corpus = generate_walks(row_normalize(g.adjacency()), {3, 15, 2});
  const auto pairs = extract_pairs(corpus, 5, 80);
  const auto sampler = build_unigram_sampler(corpus, 80, 0.75);
  auto cfg = small_config();
  cfg.deterministic = false;
  cfg.threads = 3;
  EXPECT_TRUE(train(pairs, sampler, cfg).all_finite());
}

TEST(Train, ConfigValidation) {
  PairCorpus pairs{{{0, 1}}, 2};
  const std::vector<std::uint64_t> counts{1, 1};
  const auto sampler = UnigramSampler::from_counts(counts, 0.75);
  auto cfg = small_config();
  cfg.dim = 0;
  EXPECT_THROW(train(pairs, sampler, cfg), InvalidArgument);
  cfg = small_config();
  cfg.lr_final = 1.0;
  EXPECT_THROW(train(pairs, sampler, cfg), InvalidArgument);
  EXPECT_THROW(train(PairCorpus{{}, 2}, sampler, small_config()), InvalidArgument);
}

TEST(EmbeddingFile, RoundTripIsExact) {
  const NodeIndex nodes(std::vector<std::string>{"a", "b", "c"});
  EmbeddingMatrix z(3, 2);
  Rng rng(1);
  for (double& v : z.data()) v = rng.uniform(-1, 1) * 1e-3;
  std::ostringstream out;
  write_embedding(out, nodes, z);
  std::istringstream in(out.str());
  const auto back = read_embedding(in);
  EXPECT_EQ(back.nodes, nodes);
  EXPECT_EQ(back.z, z);
}

TEST(EmbeddingFile, Errors) {
  std::istringstream short_rows("2 2\na 1 2\n");
  EXPECT_THROW(read_embedding(short_rows), ParseError);
  std::istringstream bad_width("1 2\na 1\n");
  EXPECT_THROW(read_embedding(bad_width), ParseError);
  std::istringstream dup("2 1\na 1\na 2\n");
  EXPECT_THROW(read_embedding(dup), ParseError);
}

}  // namespace
}  // namespace abrw
