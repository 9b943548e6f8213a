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
#include <cstdint>
#include <span>
#include <vector>

namespace abrw {

using Index = std::uint32_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Read-only view of one CSR row. Columns are strictly increasing.
struct SparseRow {
  std::span<const Index> cols;
  std::span<const double> values;

  std::size_t size() const noexcept { return cols.size(); }
  bool empty() const noexcept { return cols.empty(); }
  double sum() const noexcept;
};

/// Compressed sparse row matrix of doubles with sorted, unique columns per row.
/// Explicit zeros are never stored.
class SparseMatrix {
 public:
  SparseMatrix() : row_ptr_(1, 0) {}
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Builds from unordered triplets. Duplicate coordinates collapse to the
  /// value appearing last in `triplets`; zero values are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return col_idx_.size(); }

  SparseRow row(std::size_t i) const noexcept {
    const auto b = row_ptr_[i];
    const auto e = row_ptr_[i + 1];
    return {std::span<const Index>(col_idx_).subspan(b, e - b),
            std::span<const double>(values_).subspan(b, e - b)};
  }

  bool row_empty(std::size_t i) const noexcept { return row_ptr_[i] == row_ptr_[i + 1]; }

  /// Entry lookup by binary search; 0 when absent.
  double at(std::size_t i, std::size_t j) const noexcept;

  /// Same entries, larger shape. Shrinking is not allowed.
  SparseMatrix resized(std::size_t rows, std::size_t cols) const;

  std::vector<Triplet> triplets() const;

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<Index>& col_indices() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const SparseMatrix& other) const = default;

 private:
  friend class SparseRowBuilder;

  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// Appends rows in order. Each appended row must have sorted unique columns.
class SparseRowBuilder {
 public:
  SparseRowBuilder(std::size_t expected_rows, std::size_t cols);

  void append(std::span<const Index> cols, std::span<const double> values);
  void append(const SparseRow& row) { append(row.cols, row.values); }
  void append_empty() { append({}, {}); }

  SparseMatrix finish() &&;

 private:
  SparseMatrix m_;
};

}  // namespace abrw
