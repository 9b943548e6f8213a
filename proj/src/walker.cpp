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

#include "abrw/walker.hpp"

#include <algorithm>
#include <ostream>

#include "abrw/error.hpp"
#include "abrw/graph.hpp"
#include "abrw/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace abrw {

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw InvalidArgument("walks per node must be >= 1");
  if (walk_length < 1) throw InvalidArgument("walk length must be >= 1");
}

void WalkCorpus::append(std::span<const Index> walk) {
  tokens_.insert(tokens_.end(), walk.begin(), walk.end());
  offsets_.push_back(tokens_.size());
}

AliasCache::AliasCache(const TransitionMatrix& transition)
    : transition_(transition),
      once_(std::make_unique<std::once_flag[]>(transition.size())),
      tables_(transition.size()) {}

const AliasTable* AliasCache::get(Index node) const {
  if (transition_.row_empty(node)) return nullptr;
  std::call_once(once_[node], [&] { tables_[node] = AliasTable::build(transition_.row(node)); });
  return &tables_[node];
}

std::size_t AliasCache::built() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(tables_.begin(), tables_.end(), [](const AliasTable& t) { return t.size() > 0; }));
}

WalkCorpus generate_walks(const TransitionMatrix& transition, const WalkConfig& config, int threads) {
  config.validate();
  const std::size_t n = transition.size();
  const std::size_t total = config.walks_per_node * n;
  const std::size_t length = config.walk_length;
  AliasCache cache(transition);

  // Fixed slot per walk; lengths recorded separately and compacted after.
  std::vector<Index> slots(total * length);
  std::vector<std::size_t> lengths(total, 0);

#ifdef _OPENMP
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 256) num_threads(workers)
#endif
  for (std::size_t w = 0; w < total; ++w) {
    const std::size_t round = w / n;
    const auto start = static_cast<Index>(w % n);
    Rng rng(derive_seed(config.seed, round, start));
    Index* walk = slots.data() + w * length;
    walk[0] = start;
    std::size_t len = 1;
    while (len < length) {
      const AliasTable* table = cache.get(walk[len - 1]);
      if (table == nullptr) break;
      walk[len++] = table->sample(rng);
    }
    lengths[w] = len;
  }
  (void)threads;

  WalkCorpus corpus;
  std::size_t truncated = 0;
  for (std::size_t w = 0; w < total; ++w) {
    corpus.append(std::span<const Index>(slots.data() + w * length, lengths[w]));
    if (lengths[w] < length) ++truncated;
  }
  corpus.set_truncated_walks(truncated);
  return corpus;
}

void write_walks(std::ostream& out, const WalkCorpus& corpus, const NodeIndex& nodes) {
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    const auto walk = corpus.walk(w);
    for (std::size_t k = 0; k < walk.size(); ++k) {
      if (k) out << ' ';
      out << nodes.id(walk[k]);
    }
    out << '\n';
  }
}

}  // namespace abrw
