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

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <sstream>

#include "abrw/alias_table.hpp"
#include "abrw/error.hpp"
#include "abrw/graph.hpp"
#include "abrw/rng.hpp"
#include "abrw/transition.hpp"
#include "abrw/walker.hpp"
#include "support/synthetic.hpp"

namespace abrw {
namespace {

std::vector<double> frequencies(const AliasTable& table, std::size_t support_size, std::size_t draws,
                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> freq(support_size, 0.0);
  for (std::size_t s = 0; s < draws; ++s) freq[table.sample(rng)] += 1.0;
  for (double& f : freq) f /= static_cast<double>(draws);
  return freq;
}

std::vector<Index> iota_support(std::size_t n) {
  std::vector<Index> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<Index>(i);
  return s;
}

TEST(AliasTable, FairCoin) {
  const std::vector<double> p{0.5, 0.5};
  const auto table = AliasTable::build(iota_support(2), p);
  const auto f = frequencies(table, 2, 1'000'000, 1);
  EXPECT_NEAR(f[0], 0.5, 0.002);
  EXPECT_NEAR(f[1], 0.5, 0.002);
}

TEST(AliasTable, DegenerateDistribution) {
  const std::vector<Index> support{42};
  const std::vector<double> p{1.0};
  const auto table = AliasTable::build(support, p);
  Rng rng(3);
  for (int s = 0; s < 10000; ++s) ASSERT_EQ(table.sample(rng), 42u);
}

TEST(AliasTable, UniformPassesChiSquare) {
  const std::vector<double> p(4, 0.25);
  const auto table = AliasTable::build(iota_support(4), p);
  constexpr std::size_t kDraws = 1'000'000;
  const auto f = frequencies(table, 4, kDraws, 99);
  double stat = 0.0;
  for (double x : f) {
    const double observed = x * kDraws;
    const double expected = 0.25 * kDraws;
    stat += (observed - expected) * (observed - expected) / expected;
  }
  const boost::math::chi_squared dist(3);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, stat)), 0.001);
}

TEST(AliasTable, ImpliedProbabilitiesAreExact) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(100);
    std::vector<double> p(n);
    double total = 0.0;
    for (double& x : p) total += (x = rng.uniform() + (rng.below(5) == 0 ? 1e-6 : 0.0) + 1e-12);
    for (double& x : p) x /= total;
    std::vector<Index> support;
    Index col = 0;
    for (std::size_t i = 0; i < n; ++i) support.push_back(col += 1 + static_cast<Index>(rng.below(3)));
    const auto table = AliasTable::build(support, p);
    const auto implied = table.implied_probabilities();
    ASSERT_EQ(implied.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(implied[i], p[i], 1e-12);
  }
}

TEST(AliasTable, RejectsBadInput) {
  const std::vector<Index> s{0, 1};
  EXPECT_THROW(AliasTable::build(s, std::vector<double>{0.5, 0.4}), InvalidArgument);
  EXPECT_THROW(AliasTable::build(s, std::vector<double>{1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(AliasTable::build(std::vector<Index>{1, 0}, std::vector<double>{0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(AliasTable::build(std::vector<Index>{}, std::vector<double>{}), InvalidArgument);
}

TransitionMatrix two_cycle() {
  return TransitionMatrix(SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}}));
}

TEST(Walks, TwoCycleAlternates) {
  const auto corpus = generate_walks(two_cycle(), {1, 4, 0});
  ASSERT_EQ(corpus.size(), 2u);
  const auto w = corpus.walk(0);
  EXPECT_EQ(std::vector<Index>(w.begin(), w.end()), (std::vector<Index>{0, 1, 0, 1}));
  EXPECT_EQ(corpus.truncated_walks(), 0u);
}

TEST(Walks, DeadEndStartGivesSingleNodeWalk) {
  const TransitionMatrix t(SparseMatrix::from_triplets(3, 3, {{0, 1, 1.0}}));
  const auto corpus = generate_walks(t, {1, 5, 0});
  EXPECT_EQ(corpus.walk(1).size(), 1u);
  EXPECT_EQ(corpus.walk(1)[0], 1u);
  EXPECT_EQ(corpus.walk(2).size(), 1u);
  const auto w0 = corpus.walk(0);
  EXPECT_EQ(std::vector<Index>(w0.begin(), w0.end()), (std::vector<Index>{0, 1}));
  EXPECT_EQ(corpus.truncated_walks(), 3u);
}

TEST(Walks, CountAndOrder) {
  const auto g = testing::random_graph({.nodes = 100, .link_probability = 0.05, .allow_isolated = false}, 2);
  const auto t = row_normalize(g.adjacency());
  const auto corpus = generate_walks(t, {10, 80, 5});
  ASSERT_EQ(corpus.size(), 1000u);
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    EXPECT_EQ(corpus.walk(w)[0], w % 100);
    EXPECT_EQ(corpus.walk(w).size(), 80u);
  }
}

TEST(Walks, EveryStepFollowsAPositiveTransition) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = testing::random_graph({.nodes = 60, .link_probability = 0.08, .directed = true, .weighted = true},
                                         seed);
    const auto t = build_abrw_transition(g, {0.6, 4});
    const auto corpus = generate_walks(t, {3, 30, seed});
    for (std::size_t w = 0; w < corpus.size(); ++w) {
      const auto walk = corpus.walk(w);
      for (std::size_t k = 1; k < walk.size(); ++k) ASSERT_GT(t.at(walk[k - 1], walk[k]), 0.0);
      if (walk.size() < 30) {
        EXPECT_TRUE(t.row_empty(walk.back()));
      }
    }
  }
}

TEST(Walks, IndependentOfThreadCount) {
  const auto g = testing::random_graph({.nodes = 200, .link_probability = 0.03}, 8);
  const auto t = build_abrw_transition(g, {0.8, 10});
  const auto one = generate_walks(t, {4, 40, 77}, 1);
  EXPECT_EQ(one, generate_walks(t, {4, 40, 77}, 3));
  EXPECT_EQ(one, generate_walks(t, {4, 40, 77}, 0));
  EXPECT_NE(one, generate_walks(t, {4, 40, 78}, 1));
}

TEST(Walks, EmpiricalTransitionsConvergeToT) {
  const auto g = testing::random_graph({.nodes = 20, .link_probability = 0.3, .weighted = true, .allow_isolated = false},
                                       4);
  const auto t = row_normalize(g.adjacency());
  // 2500 walks per node of 21 nodes: 10^6 steps in total.
  const auto corpus = generate_walks(t, {2500, 21, 13});
  std::vector<std::vector<double>> counts(20, std::vector<double>(20, 0.0));
  std::vector<double> visits(20, 0.0);
  std::size_t steps = 0;
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    const auto walk = corpus.walk(w);
    for (std::size_t k = 1; k < walk.size(); ++k, ++steps) {
      counts[walk[k - 1]][walk[k]] += 1.0;
      visits[walk[k - 1]] += 1.0;
    }
  }
  EXPECT_EQ(steps, 1'000'000u);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 20; ++j) EXPECT_NEAR(counts[i][j] / visits[i], t.at(i, j), 0.01);
  }
}

TEST(Walks, AliasCacheBuildsOnlyVisitedRows) {
  const TransitionMatrix t(SparseMatrix::from_triplets(4, 4, {{0, 1, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}}));
  AliasCache cache(t);
  EXPECT_EQ(cache.get(1), nullptr);
  EXPECT_NE(cache.get(0), nullptr);
  EXPECT_EQ(cache.built(), 1u);
}

TEST(Walks, WriteWalksUsesExternalIds) {
  const NodeIndex nodes(std::vector<std::string>{"x", "y"});
  const auto corpus = generate_walks(two_cycle(), {1, 3, 0});
  std::ostringstream out;
  write_walks(out, corpus, nodes);
  EXPECT_EQ(out.str(), "x y x\ny x y\n");
}

TEST(Walks, ConfigValidation) {
  EXPECT_THROW(generate_walks(two_cycle(), {0, 3, 0}), InvalidArgument);
  EXPECT_THROW(generate_walks(two_cycle(), {1, 0, 0}), InvalidArgument);
}

}  // namespace
}  // namespace abrw
