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
#include "abrw/transition.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace abrw {
namespace {

using testing::Dense;

SparseMatrix from_dense(const Dense& d) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d[i].size(); ++j) {
      if (d[i][j] != 0.0) t.push_back({static_cast<Index>(i), static_cast<Index>(j), d[i][j]});
    }
  }
  return SparseMatrix::from_triplets(d.size(), d.empty() ? 0 : d[0].size(), std::move(t));
}

void expect_stochastic(const TransitionMatrix& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = t.row(i);
    if (r.empty()) continue;
    EXPECT_NEAR(r.sum(), 1.0, 1e-9) << "row " << i;
    for (double p : r.values) {
      EXPECT_GT(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(RowNormalize, Examples) {
  const auto t = row_normalize(from_dense({{0, 2, 2}, {0, 0, 0}, {1, 3, 0}}));
  EXPECT_EQ(testing::to_dense(t.matrix()), (Dense{{0, 0.5, 0.5}, {0, 0, 0}, {0.25, 0.75, 0}}));
  EXPECT_TRUE(t.row_empty(1));
}

TEST(RowNormalize, ScaleInvariant) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = testing::random_graph({.nodes = 20, .weighted = true}, seed);
    std::vector<Triplet> scaled;
    for (auto t : g.adjacency().triplets()) scaled.push_back({t.row, t.col, t.value * 8.0});
    const auto a = testing::to_dense(row_normalize(g.adjacency()).matrix());
    const auto b = testing::to_dense(row_normalize(SparseMatrix::from_triplets(20, 20, scaled)).matrix());
    EXPECT_LE(testing::max_abs_diff(a, b), 1e-15);
  }
}

TEST(TransitionMatrix, RejectsNonStochasticRows) {
  EXPECT_THROW(TransitionMatrix(from_dense({{0, 0.5}, {0, 0}})), InvalidArgument);
  EXPECT_THROW(TransitionMatrix(from_dense({{0, 1.5}, {0, 0}})), InvalidArgument);
  EXPECT_NO_THROW(TransitionMatrix(from_dense({{0, 1}, {0, 0}})));
}

TEST(AttributeSimilarity, IdenticalOrthogonalAndOracle) {
  const auto a = from_dense({{1, 2, 0}, {1, 2, 0}, {0, 0, 1}, {2, 1, 1}, {0, 0, 0}});
  const auto s0 = attribute_similarity_row(a, 0);
  EXPECT_NEAR(s0[1], 1.0, 1e-15);
  EXPECT_EQ(s0[0], 0.0);
  EXPECT_EQ(s0[2], 0.0);
  EXPECT_NEAR(s0[3], 4.0 / (std::sqrt(5.0) * std::sqrt(6.0)), 1e-15);
  EXPECT_NEAR(s0[3], 0.730297, 1e-6);
  EXPECT_EQ(s0[4], 0.0);
  const auto s4 = attribute_similarity_row(a, 4);
  for (double v : s4) EXPECT_EQ(v, 0.0);
  const auto ortho = attribute_similarity_row(from_dense({{1, 0}, {0, 1}}), 0);
  EXPECT_EQ(ortho[1], 0.0);
}

TEST(AttributeSimilarity, NegativeCosinesClampToZero) {
  const auto s = attribute_similarity_row(from_dense({{1, 0}, {-1, 0.1}}), 0);
  EXPECT_EQ(s[1], 0.0);
}

TEST(AttributeSimilarity, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_graph({.nodes = 30, .attributes = 12}, seed);
    const auto oracle = testing::dense_cosine(testing::to_dense(g.attributes()));
    AttributeSimilarity sim(g.attributes());
    std::vector<double> row(30);
    for (Index i = 0; i < 30; ++i) {
      sim.row(i, row);
      for (std::size_t j = 0; j < 30; ++j) EXPECT_NEAR(row[j], oracle[i][j], 1e-12);
    }
  }
}

TEST(SparsifyTopk, Examples) {
  const std::vector<double> r1{0.9, 0.5, 0.1, 0.7};
  EXPECT_EQ(sparsify_topk(r1, 2).cols, (std::vector<Index>{0, 3}));
  const std::vector<double> r2{0.4, 0.4, 0.4};
  EXPECT_EQ(sparsify_topk(r2, 2).cols, (std::vector<Index>{0, 1}));
  const std::vector<double> r3{0, 0, 0};
  EXPECT_TRUE(sparsify_topk(r3, 5).cols.empty());
  EXPECT_EQ(sparsify_topk(r1, 10).cols.size(), 4u);
  EXPECT_THROW(sparsify_topk(r1, 0), InvalidArgument);
}

TEST(SparsifyTopk, TiesAtTheBoundaryGoToSmallerIndices) {
  const std::vector<double> r{0.2, 0.5, 0.2, 0.9, 0.2, 0.0, 0.2};
  const auto kept = sparsify_topk(r, 3);
  EXPECT_EQ(kept.cols, (std::vector<Index>{0, 1, 3}));
  EXPECT_EQ(kept.values, (std::vector<double>{0.2, 0.5, 0.9}));
}

TEST(AttributeTransition, EqualSimilaritiesSplitEvenly) {
  const auto t = build_attribute_transition(from_dense({{1, 1}, {1, 1}, {1, 1}, {0, 0}}), 30);
  const auto r = t.row(0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r.values[0], 0.5);
  EXPECT_EQ(r.values[1], 0.5);
  EXPECT_TRUE(t.row_empty(3));
}

TEST(AttributeTransition, SmallGraphAgainstBruteForce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = testing::random_graph({.nodes = 5, .attributes = 6, .attribute_density = 1.0}, seed);
    const auto t = build_attribute_transition(g.attributes(), 2);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_LE(t.row(i).size(), 2u);
    expect_stochastic(t);
    const auto got = testing::to_dense(t.matrix());
    const auto want = testing::dense_topk_transition(testing::dense_cosine(testing::to_dense(g.attributes())), 2);
    EXPECT_TRUE(testing::same_support(got, want));
    EXPECT_LE(testing::max_abs_diff(got, want), 1e-12);
  }
}

TEST(AttributeTransition, ThreadCountDoesNotChangeTheResult) {
  const auto g = testing::random_graph({.nodes = 300, .attributes = 40, .attribute_density = 0.1}, 5);
  const auto one = build_attribute_transition(g.attributes(), 10, 1);
  EXPECT_EQ(one, build_attribute_transition(g.attributes(), 10, 4));
  EXPECT_EQ(one, build_attribute_transition(g.attributes(), 10, 0));
}

TEST(AttributeTransition, InvariantToPositiveRowScaling) {
  const auto g = testing::random_graph({.nodes = 40, .attributes = 10}, 17);
  std::vector<Triplet> scaled;
  for (auto t : g.attributes().triplets()) scaled.push_back({t.row, t.col, t.value * (1.0 + t.row)});
  const auto a = build_attribute_transition(g.attributes(), 5);
  const auto b = build_attribute_transition(SparseMatrix::from_triplets(40, 10, scaled), 5);
  EXPECT_TRUE(testing::same_support(testing::to_dense(a.matrix()), testing::to_dense(b.matrix())));
  EXPECT_LE(testing::max_abs_diff(testing::to_dense(a.matrix()), testing::to_dense(b.matrix())), 1e-12);
}

TEST(BiasedTransition, Examples) {
  const TransitionMatrix tw(from_dense({{0, 0.5, 0.5}, {0, 0, 0}, {1, 0, 0}}));
  const TransitionMatrix ta(from_dense({{0, 0, 1}, {1, 0, 0}, {0, 0, 0}}));
  const auto t = build_biased_transition(tw, ta, 0.8);
  const auto d = testing::to_dense(t.matrix());
  EXPECT_NEAR(d[0][1], 0.4, 1e-15);
  EXPECT_NEAR(d[0][2], 0.4 + 0.2, 1e-15);
  EXPECT_EQ(d[1], (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(d[2], (std::vector<double>{1, 0, 0}));

  const TransitionMatrix tw2(from_dense({{0, 0.5, 0.5}, {0, 0, 0}, {0, 0, 0}}));
  const TransitionMatrix ta2(from_dense({{1, 0, 0}, {0, 0, 1}, {0, 0, 0}}));
  const auto d2 = testing::to_dense(build_biased_transition(tw2, ta2, 0.8).matrix());
  // Row 0 disjoint supports: [0.2, 0.4, 0.4].
  EXPECT_NEAR(d2[0][0], 0.2, 1e-15);
  EXPECT_NEAR(d2[0][1], 0.4, 1e-15);
  EXPECT_NEAR(d2[0][2], 0.4, 1e-15);
  EXPECT_EQ(d2[1], (std::vector<double>{0, 0, 1}));
}

TEST(BiasedTransition, IsolatedNodeTakesTheAttributeRow) {
  const TransitionMatrix tw(from_dense({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}}));
  const TransitionMatrix ta(from_dense({{0, 1, 0}, {1, 0, 0}, {0, 1, 0}}));
  const auto d = testing::to_dense(build_biased_transition(tw, ta, 0.8).matrix());
  EXPECT_EQ(d[0], (std::vector<double>{0, 1, 0}));
}

TEST(BiasedTransition, AlphaRangeChecked) {
  const TransitionMatrix t(from_dense({{0, 1}, {1, 0}}));
  EXPECT_THROW(build_biased_transition(t, t, 1.2), InvalidArgument);
  EXPECT_THROW(build_biased_transition(t, t, -0.1), InvalidArgument);
}

TEST(AbrwTransition, EndpointsAreExact) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = testing::random_graph({.nodes = 30,
                                          .link_probability = 0.1,
                                          .directed = seed % 2 == 0,
                                          .weighted = seed % 3 == 0,
                                          .allow_isolated = false,
                                          .allow_zero_attributes = false},
                                         seed);
    EXPECT_EQ(build_abrw_transition(g, {1.0, 5}), row_normalize(g.adjacency()));
    EXPECT_EQ(build_abrw_transition(g, {0.0, 5}), build_attribute_transition(g.attributes(), 5));
  }
}

TEST(AbrwTransition, MatchesDensePipelineOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::RandomGraphSpec spec;
    spec.nodes = 2 + seed % 49;
    spec.link_probability = 0.05 + 0.3 * static_cast<double>(seed % 7) / 7.0;
    spec.attributes = 1 + seed % 17;
    spec.attribute_density = 0.1 + 0.1 * static_cast<double>(seed % 5);
    spec.directed = seed % 2 == 1;
    spec.weighted = seed % 3 == 0;
    const auto g = testing::random_graph(spec, seed);
    const double alpha = static_cast<double>(seed % 11) / 10.0;
    const std::size_t k = 1 + seed % 8;
    const auto t = build_abrw_transition(g, {alpha, k});
    expect_stochastic(t);
    const auto got = testing::to_dense(t.matrix());
    const auto hint = testing::to_dense(build_attribute_transition(g.attributes(), k).matrix());
    const auto want = testing::dense_abrw_transition(g, alpha, k, &hint, 1e-12);
    EXPECT_TRUE(testing::same_support(got, want)) << "seed " << seed;
    EXPECT_LE(testing::max_abs_diff(got, want), 1e-12) << "seed " << seed;
  }
}

TEST(AbrwTransition, WriteTransitionListsEveryEntry) {
  const TransitionMatrix t(from_dense({{0, 0.25, 0.75}, {0, 0, 0}, {1, 0, 0}}));
  std::ostringstream out;
  write_transition(out, t);
  EXPECT_EQ(out.str(), "0 1 0.25\n0 2 0.75\n2 0 1\n");
}

}  // namespace
}  // namespace abrw
