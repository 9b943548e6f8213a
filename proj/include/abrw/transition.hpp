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
#include <iosfwd>
#include <span>
#include <vector>

#include "abrw/sparse_matrix.hpp"

namespace abrw {

class AttributedGraph;

/// Sparse row-stochastic matrix. Every row either sums to 1 (within 1e-9)
/// or is empty; an empty row is a dead end for the walker.
class TransitionMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  TransitionMatrix() = default;

  /// Checks the row-stochastic invariant and throws InvalidArgument if it
  /// does not hold.
  explicit TransitionMatrix(SparseMatrix rows);

  std::size_t size() const noexcept { return m_.rows(); }
  SparseRow row(std::size_t i) const noexcept { return m_.row(i); }
  bool row_empty(std::size_t i) const noexcept { return m_.row_empty(i); }
  double at(std::size_t i, std::size_t j) const noexcept { return m_.at(i, j); }
  std::size_t nnz() const noexcept { return m_.nnz(); }
  const SparseMatrix& matrix() const noexcept { return m_; }

  bool operator==(const TransitionMatrix& other) const = default;

 private:
  SparseMatrix m_;
};

struct FusionConfig {
  double alpha = 0.8;  ///< weight of the structural transition row
  std::size_t top_k = 30;

  void validate() const;
};

struct SparseVector {
  std::vector<Index> cols;
  std::vector<double> values;

  bool operator==(const SparseVector&) const = default;
};

/// Cosine similarity between attribute rows, computed one row at a time
/// through an inverted (column) index. Rows with zero norm have similarity 0
/// to everything; the diagonal is 0 and negative cosines are clamped to 0.
class AttributeSimilarity {
 public:
  explicit AttributeSimilarity(const SparseMatrix& attributes);

  std::size_t size() const noexcept { return unit_rows_.rows(); }

  /// Writes row i of the similarity matrix into `out` (length n).
  void row(Index i, std::span<double> out) const;

  /// Attribute rows scaled to unit length (zero rows stay zero).
  const SparseMatrix& unit_rows() const noexcept { return unit_rows_; }

 private:
  SparseMatrix unit_rows_;
  // Column-major copy of unit_rows_: for each attribute column, the (row,
  // value) pairs in increasing row order.
  std::vector<std::size_t> col_ptr_;
  std::vector<Index> col_rows_;
  std::vector<double> col_values_;
};

/// Row-wise normalization of a nonnegative matrix; zero rows stay zero.
TransitionMatrix row_normalize(const SparseMatrix& weights);

std::vector<double> attribute_similarity_row(const SparseMatrix& attributes, Index i);

/// Keeps the k largest strictly positive entries (ties broken toward the
/// smaller column) using selection, not a full sort. Output columns sorted.
SparseVector sparsify_topk(std::span<const double> row, std::size_t k);

/// Attribute transition matrix, built row by row so memory stays O(n + nnz).
/// `threads` <= 0 uses the OpenMP default. Output does not depend on it.
TransitionMatrix build_attribute_transition(const SparseMatrix& attributes, std::size_t top_k, int threads = 0);

/// Fuses structural and attribute rows: the attribute row when the structural
/// row is empty, the structural row when the attribute row is empty, and the
/// alpha-weighted mixture otherwise.
TransitionMatrix build_biased_transition(const TransitionMatrix& structural, const TransitionMatrix& attribute,
                                         double alpha);

/// Full pipeline over a graph: row_normalize(W), attribute transition, fusion.
TransitionMatrix build_abrw_transition(const AttributedGraph& graph, const FusionConfig& config, int threads = 0);

/// Debug dump, one `row col prob` line per stored entry.
void write_transition(std::ostream& out, const TransitionMatrix& t);

}  // namespace abrw
