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

#include "abrw/sparse_matrix.hpp"

#include <algorithm>
#include <cassert>

#include "abrw/error.hpp"

namespace abrw {

double SparseRow::sum() const noexcept {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw InvalidArgument("triplet index out of range");
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::vector<std::size_t> counts(rows, 0);
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    // Stable sort keeps input order within equal coordinates, so the last
    // element of a run is the last one seen.
    if (k + 1 < triplets.size() && triplets[k + 1].row == triplets[k].row &&
        triplets[k + 1].col == triplets[k].col) {
      continue;
    }
    if (triplets[k].value == 0.0) continue;
    m.col_idx_.push_back(triplets[k].col);
    m.values_.push_back(triplets[k].value);
    ++counts[triplets[k].row];
  }
  for (std::size_t i = 0; i < rows; ++i) m.row_ptr_[i + 1] = m.row_ptr_[i] + counts[i];
  return m;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const noexcept {
  const auto r = row(i);
  const auto it = std::lower_bound(r.cols.begin(), r.cols.end(), static_cast<Index>(j));
  if (it == r.cols.end() || *it != j) return 0.0;
  return r.values[static_cast<std::size_t>(it - r.cols.begin())];
}

SparseMatrix SparseMatrix::resized(std::size_t rows, std::size_t cols) const {
  if (rows < this->rows() || cols < cols_) throw InvalidArgument("SparseMatrix::resized cannot shrink");
  SparseMatrix m = *this;
  m.cols_ = cols;
  m.row_ptr_.resize(rows + 1, row_ptr_.back());
  return m;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows(); ++i) {
    const auto r = row(i);
    for (std::size_t k = 0; k < r.size(); ++k) out.push_back({static_cast<Index>(i), r.cols[k], r.values[k]});
  }
  return out;
}

SparseRowBuilder::SparseRowBuilder(std::size_t expected_rows, std::size_t cols) {
  m_.cols_ = cols;
  m_.row_ptr_.reserve(expected_rows + 1);
}

void SparseRowBuilder::append(std::span<const Index> cols, std::span<const double> values) {
  assert(cols.size() == values.size());
  assert(std::is_sorted(cols.begin(), cols.end()));
  m_.col_idx_.insert(m_.col_idx_.end(), cols.begin(), cols.end());
  m_.values_.insert(m_.values_.end(), values.begin(), values.end());
  m_.row_ptr_.push_back(m_.col_idx_.size());
}

SparseMatrix SparseRowBuilder::finish() && { return std::move(m_); }

}  // namespace abrw
