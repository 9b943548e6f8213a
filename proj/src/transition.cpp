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

#include "abrw/transition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "abrw/error.hpp"
#include "abrw/graph.hpp"
#include "text_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace abrw {

TransitionMatrix::TransitionMatrix(SparseMatrix rows) : m_(std::move(rows)) {
  if (m_.rows() != m_.cols()) throw InvalidArgument("transition matrix must be square");
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    const auto r = m_.row(i);
    if (r.empty()) continue;
    for (double p : r.values) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("transition probability outside [0, 1]");
    }
    if (std::abs(r.sum() - 1.0) > kRowSumTolerance) {
      throw InvalidArgument("transition row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

void FusionConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
}

AttributeSimilarity::AttributeSimilarity(const SparseMatrix& attributes) {
  const std::size_t n = attributes.rows();
  const std::size_t m = attributes.cols();
  SparseRowBuilder builder(n, m);
  std::vector<double> scaled;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = attributes.row(i);
    double sq = 0.0;
    for (double v : r.values) sq += v * v;
    if (sq == 0.0) {
      builder.append_empty();
      continue;
    }
    const double norm = std::sqrt(sq);
    scaled.assign(r.values.begin(), r.values.end());
    for (double& v : scaled) v /= norm;
    builder.append(r.cols, scaled);
  }
  unit_rows_ = std::move(builder).finish();

  col_ptr_.assign(m + 1, 0);
  for (Index c : unit_rows_.col_indices()) ++col_ptr_[c + 1];
  std::partial_sum(col_ptr_.begin(), col_ptr_.end(), col_ptr_.begin());
  col_rows_.resize(unit_rows_.nnz());
  col_values_.resize(unit_rows_.nnz());
  std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = unit_rows_.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      const auto slot = fill[r.cols[k]]++;
      col_rows_[slot] = static_cast<Index>(i);
      col_values_[slot] = r.values[k];
    }
  }
}

void AttributeSimilarity::row(Index i, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const auto r = unit_rows_.row(i);
  // Columns of row i are visited in increasing order, so each out[j]
  // accumulates the same products in the same order as a plain dot product.
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double v = r.values[k];
    const Index c = r.cols[k];
    for (std::size_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) out[col_rows_[p]] += v * col_values_[p];
  }
  for (double& s : out) s = std::max(s, 0.0);
  out[i] = 0.0;
}

TransitionMatrix row_normalize(const SparseMatrix& weights) {
  if (weights.rows() != weights.cols()) throw InvalidArgument("row_normalize expects a square matrix");
  SparseRowBuilder builder(weights.rows(), weights.cols());
  std::vector<double> scaled;
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    const auto r = weights.row(i);
    const double total = r.sum();
    if (total == 0.0) {
      builder.append_empty();
      continue;
    }
    scaled.assign(r.values.begin(), r.values.end());
    for (double& v : scaled) v /= total;
    builder.append(r.cols, scaled);
  }
  return TransitionMatrix(std::move(builder).finish());
}

std::vector<double> attribute_similarity_row(const SparseMatrix& attributes, Index i) {
  if (i >= attributes.rows()) throw InvalidArgument("node index out of range");
  AttributeSimilarity similarity(attributes);
  std::vector<double> out(attributes.rows());
  similarity.row(i, out);
  return out;
}

SparseVector sparsify_topk(std::span<const double> row, std::size_t k) {
  if (k < 1) throw InvalidArgument("top_k must be >= 1");
  std::vector<Index> candidates;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] > 0.0) candidates.push_back(static_cast<Index>(j));
  }
  if (candidates.size() > k) {
    // Strict total order: larger value first, then smaller column.
    auto before = [&](Index a, Index b) { return row[a] != row[b] ? row[a] > row[b] : a < b; };
    std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k - 1), candidates.end(),
                     before);
    candidates.resize(k);
    std::sort(candidates.begin(), candidates.end());
  }
  SparseVector out;
  out.cols = std::move(candidates);
  out.values.reserve(out.cols.size());
  for (Index j : out.cols) out.values.push_back(row[j]);
  return out;
}

TransitionMatrix build_attribute_transition(const SparseMatrix& attributes, std::size_t top_k, int threads) {
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
  const AttributeSimilarity similarity(attributes);
  const std::size_t n = attributes.rows();
  std::vector<SparseVector> rows(n);

#ifdef _OPENMP
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(workers)
#endif
  {
    std::vector<double> buffer(n);
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 64)
#endif
    for (std::size_t i = 0; i < n; ++i) {
      if (similarity.unit_rows().row_empty(i)) continue;
      similarity.row(static_cast<Index>(i), buffer);
      SparseVector kept = sparsify_topk(buffer, top_k);
      double total = 0.0;
      for (double v : kept.values) total += v;
      if (total > 0.0) {
        for (double& v : kept.values) v /= total;
      }
      rows[i] = std::move(kept);
    }
  }
  (void)threads;

  SparseRowBuilder builder(n, n);
  for (const auto& r : rows) builder.append(r.cols, r.values);
  return TransitionMatrix(std::move(builder).finish());
}

TransitionMatrix build_biased_transition(const TransitionMatrix& structural, const TransitionMatrix& attribute,
                                         double alpha) {
  if (structural.size() != attribute.size()) throw InvalidArgument("transition matrices differ in size");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
  const std::size_t n = structural.size();
  SparseRowBuilder builder(n, n);
  std::vector<Index> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = structural.row(i);
    const auto a = attribute.row(i);
    if (s.empty()) {
      builder.append(a);
      continue;
    }
    if (a.empty()) {
      builder.append(s);
      continue;
    }
    cols.clear();
    vals.clear();
    std::size_t p = 0;
    std::size_t q = 0;
    auto push = [&](Index c, double v) {
      if (v != 0.0) {
        cols.push_back(c);
        vals.push_back(v);
      }
    };
    while (p < s.size() || q < a.size()) {
      if (q == a.size() || (p < s.size() && s.cols[p] < a.cols[q])) {
        push(s.cols[p], alpha * s.values[p]);
        ++p;
      } else if (p == s.size() || a.cols[q] < s.cols[p]) {
        push(a.cols[q], (1.0 - alpha) * a.values[q]);
        ++q;
      } else {
        push(s.cols[p], alpha * s.values[p] + (1.0 - alpha) * a.values[q]);
        ++p;
        ++q;
      }
    }
    builder.append(cols, vals);
  }
  return TransitionMatrix(std::move(builder).finish());
}

TransitionMatrix build_abrw_transition(const AttributedGraph& graph, const FusionConfig& config, int threads) {
  config.validate();
  const auto structural = row_normalize(graph.adjacency());
  const auto attribute = build_attribute_transition(graph.attributes(), config.top_k, threads);
  return build_biased_transition(structural, attribute, config.alpha);
}

void write_transition(std::ostream& out, const TransitionMatrix& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = t.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) out << i << ' ' << r.cols[k] << ' ' << detail::format_real(r.values[k]) << '\n';
  }
}

}  // namespace abrw
