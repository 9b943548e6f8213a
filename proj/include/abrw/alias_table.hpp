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

#include <span>
#include <vector>

#include "abrw/rng.hpp"
#include "abrw/sparse_matrix.hpp"

namespace abrw {

/// Walker/Vose alias table over a sparse probability row: O(L) build,
/// O(1) sampling.
class AliasTable {
 public:
  AliasTable() = default;

  /// `support` must be strictly increasing and `probs` positive, summing to
  /// 1 within 1e-9 (they are rescaled by their exact sum). Throws
  /// InvalidArgument on an empty row.
  static AliasTable build(std::span<const Index> support, std::span<const double> probs);
  static AliasTable build(const SparseRow& row) { return build(row.cols, row.values); }

  Index sample(Rng& rng) const {
    const auto slot = rng.below(prob_.size());
    return rng.uniform() < prob_[slot] ? support_[slot] : alias_[slot];
  }

  std::size_t size() const noexcept { return prob_.size(); }
  std::span<const double> prob() const noexcept { return prob_; }
  std::span<const Index> alias() const noexcept { return alias_; }
  std::span<const Index> support() const noexcept { return support_; }

  /// Probability the table assigns to each support column, in support order.
  std::vector<double> implied_probabilities() const;

 private:
  std::vector<double> prob_;
  std::vector<Index> alias_;
  std::vector<Index> support_;
};

}  // namespace abrw
