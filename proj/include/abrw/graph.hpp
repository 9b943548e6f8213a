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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "abrw/sparse_matrix.hpp"

namespace abrw {

/// Bidirectional mapping between external string identifiers and dense
/// indices. Indices are assigned in first-appearance order.
class NodeIndex {
 public:
  NodeIndex() = default;
  explicit NodeIndex(std::vector<std::string> ids);

  /// Returns the index of `id`, assigning the next free index if unseen.
  Index intern(std::string_view id);
  std::optional<Index> find(std::string_view id) const;

  const std::string& id(Index i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }

  bool operator==(const NodeIndex& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> lookup_;
};

/// Attributed network: weighted adjacency W (n x n) plus attribute matrix
/// A (n x m). Undirected graphs store both (i,j) and (j,i).
/// Missing attributes are encoded as all-zero rows.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  /// Validates: square adjacency matching the node count, nonnegative finite
  /// weights, no self-loops, symmetric storage when undirected, attribute row
  /// count equal to n (or an attribute matrix with zero columns).
  AttributedGraph(NodeIndex nodes, SparseMatrix adjacency, SparseMatrix attributes, bool directed);

  const NodeIndex& nodes() const noexcept { return nodes_; }
  const SparseMatrix& adjacency() const noexcept { return adjacency_; }
  const SparseMatrix& attributes() const noexcept { return attributes_; }
  bool directed() const noexcept { return directed_; }

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_attributes() const noexcept { return attributes_.cols(); }
  bool has_attributes() const noexcept { return attributes_.cols() > 0; }

  /// Number of links: stored entries for directed graphs, half of them for
  /// undirected ones.
  std::size_t num_links() const noexcept { return directed_ ? adjacency_.nnz() : adjacency_.nnz() / 2; }

  bool has_link(Index i, Index j) const noexcept { return adjacency_.at(i, j) != 0.0; }

  AttributedGraph with_adjacency(SparseMatrix adjacency) const;
  AttributedGraph with_attributes(SparseMatrix attributes) const;

  bool operator==(const AttributedGraph& other) const = default;

 private:
  NodeIndex nodes_;
  SparseMatrix adjacency_;
  SparseMatrix attributes_;
  bool directed_ = false;
};

/// Partial node -> class label map, ordered by node index.
using LabelSet = std::map<Index, std::string>;

enum class Polarity : std::uint8_t { kNegative = 0, kPositive = 1 };

/// A ground-truth link sample. Positive samples are removed true links and
/// carry their original weight; negative samples are non-links.
struct EdgeSample {
  Index src;
  Index dst;
  Polarity polarity;
  double weight = 1.0;

  bool operator==(const EdgeSample&) const = default;
};

/// What to do with an attribute line naming a node absent from the graph.
enum class UnknownNodePolicy { kError, kAddIsolated };

// --- loading -------------------------------------------------------------

/// Edge list: `src dst [weight]` per line, `#` starts a comment. Repeated
/// edges keep the last weight; self-loops and negative weights are rejected.
/// When `weighted` is false any weight column is validated but ignored.
AttributedGraph read_edge_list(std::istream& in, bool directed, bool weighted,
                               const std::string& source = "<stream>");
AttributedGraph load_edge_list(const std::filesystem::path& path, bool directed, bool weighted);

/// Attributes, dense (`id v1 ... vm`) or sparse (header `@dim m`, then
/// `id idx:val ...` with 0-based idx). Unlisted nodes keep all-zero rows.
AttributedGraph read_attributes(const AttributedGraph& graph, std::istream& in,
                                UnknownNodePolicy policy = UnknownNodePolicy::kError,
                                const std::string& source = "<stream>");
AttributedGraph load_attributes(const AttributedGraph& graph, const std::filesystem::path& path,
                                UnknownNodePolicy policy = UnknownNodePolicy::kError);

/// Labels: `id label` per line; duplicate ids keep the last label.
LabelSet read_labels(const NodeIndex& nodes, std::istream& in, const std::string& source = "<stream>");
LabelSet load_labels(const NodeIndex& nodes, const std::filesystem::path& path);

/// Ground-truth samples: `src dst polarity [weight]` with polarity 1 or 0.
std::vector<EdgeSample> read_samples(const NodeIndex& nodes, std::istream& in,
                                     const std::string& source = "<stream>");
std::vector<EdgeSample> load_samples(const NodeIndex& nodes, const std::filesystem::path& path);

// --- saving --------------------------------------------------------------

/// Writes links so that reloading reproduces the node order (every node must
/// have at least one link for that guarantee; isolated nodes are omitted).
void write_edge_list(std::ostream& out, const AttributedGraph& graph);
/// Writes attributes in the sparse format.
void write_attributes(std::ostream& out, const AttributedGraph& graph);
void write_labels(std::ostream& out, const NodeIndex& nodes, const LabelSet& labels);
void write_samples(std::ostream& out, const NodeIndex& nodes, std::span<const EdgeSample> samples);

// --- perturbation --------------------------------------------------------

struct Perturbation {
  AttributedGraph graph;
  std::vector<EdgeSample> removed;
};

/// Removes floor(fraction * num_links) links uniformly at random. For
/// undirected graphs both stored directions of a link go together.
Perturbation remove_links(const AttributedGraph& graph, double fraction, std::uint64_t seed);

/// Re-inserts positive samples with their recorded weights.
AttributedGraph add_links(const AttributedGraph& graph, std::span<const EdgeSample> samples);

/// Rejection-samples `count` distinct non-links of `graph` (no self pairs).
/// Throws when the graph has fewer non-links than requested or the attempt
/// budget runs out.
std::vector<EdgeSample> sample_negative_edges(const AttributedGraph& graph, std::size_t count,
                                              std::uint64_t seed);

}  // namespace abrw
