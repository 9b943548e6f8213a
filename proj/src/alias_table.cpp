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

#include "abrw/alias_table.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "abrw/error.hpp"

namespace abrw {

AliasTable AliasTable::build(std::span<const Index> support, std::span<const double> probs) {
  if (support.empty()) throw InvalidArgument("cannot build an alias table for an all-zero row");
  if (support.size() != probs.size()) throw InvalidArgument("support and probability lengths differ");
  if (std::adjacent_find(support.begin(), support.end(), std::greater_equal<>()) != support.end()) {
    throw InvalidArgument("alias table support must be strictly increasing");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw InvalidArgument("alias table probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("alias table probabilities must sum to 1");

  const std::size_t n = support.size();
  AliasTable t;
  t.support_.assign(support.begin(), support.end());
  t.alias_.assign(support.begin(), support.end());
  t.prob_.assign(n, 1.0);

  std::vector<double> scaled(n);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probs[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    t.prob_[s] = scaled[s];
    t.alias_[s] = support[l];
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto i : small) t.prob_[i] = 1.0;
  for (auto i : large) t.prob_[i] = 1.0;
  return t;
}

std::vector<double> AliasTable::implied_probabilities() const {
  const std::size_t n = prob_.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] += prob_[k] / static_cast<double>(n);
    if (prob_[k] < 1.0) {
      const auto it = std::lower_bound(support_.begin(), support_.end(), alias_[k]);
      out[static_cast<std::size_t>(it - support_.begin())] += (1.0 - prob_[k]) / static_cast<double>(n);
    }
  }
  return out;
}

}  // namespace abrw
