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
#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "abrw/alias_table.hpp"
#include "abrw/transition.hpp"

namespace abrw {

class NodeIndex;

struct WalkConfig {
  std::size_t walks_per_node = 10;
  /// Total number of nodes in a walk, start node included.
  std::size_t walk_length = 80;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Walks stored back to back. Walk w occupies tokens[offsets[w], offsets[w+1]).
class WalkCorpus {
 public:
  WalkCorpus() : offsets_(1, 0) {}

  void append(std::span<const Index> walk);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::size_t num_tokens() const noexcept { return tokens_.size(); }
  std::span<const Index> walk(std::size_t w) const noexcept {
    return std::span<const Index>(tokens_).subspan(offsets_[w], offsets_[w + 1] - offsets_[w]);
  }
  std::span<const Index> tokens() const noexcept { return tokens_; }

  /// Walks that stopped before the configured length at a dead-end row.
  std::size_t truncated_walks() const noexcept { return truncated_; }
  void set_truncated_walks(std::size_t n) noexcept { truncated_ = n; }

  bool operator==(const WalkCorpus&) const = default;

 private:
  std::vector<Index> tokens_;
  std::vector<std::size_t> offsets_;
  std::size_t truncated_ = 0;
};

/// Per-row alias tables, built on first use. Safe for concurrent lookups:
/// each row is constructed exactly once.
class AliasCache {
 public:
  explicit AliasCache(const TransitionMatrix& transition);

  /// nullptr for an empty (dead-end) row.
  const AliasTable* get(Index node) const;

  std::size_t built() const noexcept;

 private:
  const TransitionMatrix& transition_;
  mutable std::unique_ptr<std::once_flag[]> once_;
  mutable std::vector<AliasTable> tables_;
};

/// Generates walks_per_node rounds of one walk per start node, round-major
/// then node order. Every walk draws from its own stream seeded by
/// (seed, round, start), so the corpus is identical for any `threads`.
/// A walk ends early when it reaches an empty row.
WalkCorpus generate_walks(const TransitionMatrix& transition, const WalkConfig& config, int threads = 1);

/// One walk per line, external ids separated by spaces.
void write_walks(std::ostream& out, const WalkCorpus& corpus, const NodeIndex& nodes);

}  // namespace abrw
