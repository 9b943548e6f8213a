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

#include "abrw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include "abrw/error.hpp"
#include "abrw/rng.hpp"
#include "text_io.hpp"

namespace abrw {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::uint64_t pair_key(Index a, Index b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

}  // namespace

NodeIndex::NodeIndex(std::vector<std::string> ids) {
  for (auto& id : ids) {
    if (find(id)) throw InvalidArgument("duplicate node id '" + id + "'");
    intern(id);
  }
}

Index NodeIndex::intern(std::string_view id) {
  std::string key(id);
  if (auto it = lookup_.find(key); it != lookup_.end()) return it->second;
  const auto index = static_cast<Index>(ids_.size());
  ids_.push_back(key);
  lookup_.emplace(std::move(key), index);
  return index;
}

std::optional<Index> NodeIndex::find(std::string_view id) const {
  if (auto it = lookup_.find(std::string(id)); it != lookup_.end()) return it->second;
  return std::nullopt;
}

AttributedGraph::AttributedGraph(NodeIndex nodes, SparseMatrix adjacency, SparseMatrix attributes, bool directed)
    : nodes_(std::move(nodes)),
      adjacency_(std::move(adjacency)),
      attributes_(std::move(attributes)),
      directed_(directed) {
  const std::size_t n = nodes_.size();
  if (adjacency_.rows() != n || adjacency_.cols() != n) throw InvalidArgument("adjacency must be n x n");
  if (attributes_.cols() == 0) {
    attributes_ = SparseMatrix(n, 0);
  } else if (attributes_.rows() != n) {
    throw InvalidArgument("attribute row count must equal node count");
  }
  for (double w : adjacency_.values()) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("edge weights must be finite and nonnegative");
  }
  for (double a : attributes_.values()) {
    if (!std::isfinite(a)) throw InvalidArgument("attributes must be finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = adjacency_.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row.cols[k] == i) throw InvalidArgument("self-loop on node '" + nodes_.id(static_cast<Index>(i)) + "'");
      if (!directed_ && adjacency_.at(row.cols[k], i) != row.values[k]) {
        throw InvalidArgument("undirected adjacency must be symmetric");
      }
    }
  }
}

AttributedGraph AttributedGraph::with_adjacency(SparseMatrix adjacency) const {
  return AttributedGraph(nodes_, std::move(adjacency), attributes_, directed_);
}

AttributedGraph AttributedGraph::with_attributes(SparseMatrix attributes) const {
  return AttributedGraph(nodes_, adjacency_, std::move(attributes), directed_);
}

// --- loading -------------------------------------------------------------

AttributedGraph read_edge_list(std::istream& in, bool directed, bool weighted, const std::string& source) {
  NodeIndex nodes;
  std::vector<Triplet> triplets;
  detail::LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(source, reader.line_no(), "expected 'src dst [weight]', got " +
                                                     std::to_string(tokens.size()) + " tokens");
    }
    double weight = 1.0;
    if (tokens.size() == 3) {
      const auto parsed = detail::parse_double(tokens[2]);
      if (!parsed) throw ParseError(source, reader.line_no(), "non-numeric weight '" + std::string(tokens[2]) + "'");
      if (*parsed < 0.0) throw ParseError(source, reader.line_no(), "negative weight");
      if (weighted) weight = *parsed;
    }
    if (tokens[0] == tokens[1]) {
      throw ParseError(source, reader.line_no(), "self-loop on '" + std::string(tokens[0]) + "'");
    }
    const Index src = nodes.intern(tokens[0]);
    const Index dst = nodes.intern(tokens[1]);
    triplets.push_back({src, dst, weight});
    if (!directed) triplets.push_back({dst, src, weight});
  }
  const std::size_t n = nodes.size();
  auto adjacency = SparseMatrix::from_triplets(n, n, std::move(triplets));
  return AttributedGraph(std::move(nodes), std::move(adjacency), SparseMatrix(n, 0), directed);
}

AttributedGraph load_edge_list(const std::filesystem::path& path, bool directed, bool weighted) {
  auto in = open_input(path);
  return read_edge_list(in, directed, weighted, path.string());
}

AttributedGraph read_attributes(const AttributedGraph& graph, std::istream& in, UnknownNodePolicy policy,
                                const std::string& source) {
  NodeIndex nodes = graph.nodes();
  std::vector<Triplet> triplets;
  std::optional<std::size_t> dim;
  bool sparse = false;
  bool first = true;
  // Rows listed more than once keep their last occurrence.
  std::unordered_map<Index, std::pair<std::size_t, std::size_t>> row_span;

  detail::LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (first && tokens[0] == "@dim") {
      first = false;
      sparse = true;
      const auto m = tokens.size() == 2 ? detail::parse_uint(tokens[1]) : std::nullopt;
      if (!m || *m == 0) throw ParseError(source, reader.line_no(), "expected '@dim m' with m > 0");
      dim = *m;
      continue;
    }
    first = false;

    Index node = 0;
    if (auto found = nodes.find(tokens[0])) {
      node = *found;
    } else if (policy == UnknownNodePolicy::kAddIsolated) {
      node = nodes.intern(tokens[0]);
    } else {
      throw ParseError(source, reader.line_no(), "unknown node id '" + std::string(tokens[0]) + "'");
    }

    const std::size_t begin = triplets.size();
    if (sparse) {
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        const auto colon = tokens[t].find(':');
        const auto idx = colon == std::string_view::npos ? std::nullopt : detail::parse_uint(tokens[t].substr(0, colon));
        const auto val = colon == std::string_view::npos ? std::nullopt : detail::parse_double(tokens[t].substr(colon + 1));
        if (!idx || !val) throw ParseError(source, reader.line_no(), "bad sparse entry '" + std::string(tokens[t]) + "'");
        if (*idx >= *dim) {
          throw ParseError(source, reader.line_no(), "attribute index " + std::to_string(*idx) + " >= dim " +
                                                         std::to_string(*dim));
        }
        triplets.push_back({node, static_cast<Index>(*idx), *val});
      }
    } else {
      const std::size_t m = tokens.size() - 1;
      if (!dim) {
        if (m == 0) throw ParseError(source, reader.line_no(), "attribute row has no values");
        dim = m;
      } else if (m != *dim) {
        throw ParseError(source, reader.line_no(), "inconsistent attribute count: expected " + std::to_string(*dim) +
                                                       ", got " + std::to_string(m));
      }
      for (std::size_t c = 0; c < m; ++c) {
        const auto val = detail::parse_double(tokens[c + 1]);
        if (!val) throw ParseError(source, reader.line_no(), "non-numeric attribute '" + std::string(tokens[c + 1]) + "'");
        if (*val != 0.0) triplets.push_back({node, static_cast<Index>(c), *val});
      }
    }
    row_span[node] = {begin, triplets.size()};
  }

  std::vector<Triplet> kept;
  kept.reserve(triplets.size());
  for (const auto& [node, span] : row_span) {
    kept.insert(kept.end(), triplets.begin() + static_cast<std::ptrdiff_t>(span.first),
                triplets.begin() + static_cast<std::ptrdiff_t>(span.second));
  }
  const std::size_t n = nodes.size();
  const std::size_t m = dim.value_or(0);
  auto attributes = SparseMatrix::from_triplets(n, m, std::move(kept));
  auto adjacency = graph.adjacency().resized(n, n);
  return AttributedGraph(std::move(nodes), std::move(adjacency), std::move(attributes), graph.directed());
}

AttributedGraph load_attributes(const AttributedGraph& graph, const std::filesystem::path& path,
                                UnknownNodePolicy policy) {
  auto in = open_input(path);
  return read_attributes(graph, in, policy, path.string());
}

LabelSet read_labels(const NodeIndex& nodes, std::istream& in, const std::string& source) {
  LabelSet labels;
  detail::LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(source, reader.line_no(), "expected 'id label'");
    const auto node = nodes.find(tokens[0]);
    if (!node) throw ParseError(source, reader.line_no(), "unknown node id '" + std::string(tokens[0]) + "'");
    labels[*node] = std::string(tokens[1]);
  }
  return labels;
}

LabelSet load_labels(const NodeIndex& nodes, const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_labels(nodes, in, path.string());
}

std::vector<EdgeSample> read_samples(const NodeIndex& nodes, std::istream& in, const std::string& source) {
  std::vector<EdgeSample> samples;
  detail::LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 3 && tokens.size() != 4) {
      throw ParseError(source, reader.line_no(), "expected 'src dst polarity [weight]'");
    }
    const auto src = nodes.find(tokens[0]);
    const auto dst = nodes.find(tokens[1]);
    if (!src) throw ParseError(source, reader.line_no(), "unknown node id '" + std::string(tokens[0]) + "'");
    if (!dst) throw ParseError(source, reader.line_no(), "unknown node id '" + std::string(tokens[1]) + "'");
    if (*src == *dst) throw ParseError(source, reader.line_no(), "sample is a self pair");
    EdgeSample sample{*src, *dst, Polarity::kPositive};
    if (tokens[2] == "1") {
      sample.polarity = Polarity::kPositive;
    } else if (tokens[2] == "0") {
      sample.polarity = Polarity::kNegative;
    } else {
      throw ParseError(source, reader.line_no(), "polarity must be 1 or 0");
    }
    if (tokens.size() == 4) {
      const auto w = detail::parse_double(tokens[3]);
      if (!w || *w < 0.0) throw ParseError(source, reader.line_no(), "bad sample weight");
      sample.weight = *w;
    }
    samples.push_back(sample);
  }
  return samples;
}

std::vector<EdgeSample> load_samples(const NodeIndex& nodes, const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_samples(nodes, in, path.string());
}

// --- saving --------------------------------------------------------------

void write_edge_list(std::ostream& out, const AttributedGraph& graph) {
  const auto& adj = graph.adjacency();
  const std::size_t n = graph.num_nodes();
  const bool directed = graph.directed();
  const bool weighted =
      std::any_of(adj.values().begin(), adj.values().end(), [](double w) { return w != 1.0; });

  // Incoming edges are only needed to find an already-written partner in the
  // directed case.
  std::vector<std::vector<Index>> incoming;
  if (directed) {
    incoming.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (Index j : adj.row(i).cols) incoming[j].push_back(static_cast<Index>(i));
    }
  }

  std::unordered_set<std::uint64_t> written;
  std::vector<bool> seen(n, false);
  const auto& ids = graph.nodes();
  auto emit = [&](Index u, Index v) {
    const auto key = directed ? pair_key(u, v) : pair_key(std::min(u, v), std::max(u, v));
    if (!written.insert(key).second) return;
    out << ids.id(u) << ' ' << ids.id(v);
    if (weighted) out << ' ' << detail::format_real(adj.at(u, v));
    out << '\n';
    seen[u] = seen[v] = true;
  };

  // First pass: introduce nodes in index order so the loader assigns the same
  // indices. Each node is written alongside an already-introduced partner, or
  // together with its successor when both first appear on the same line.
  for (std::size_t k = 0; k < n; ++k) {
    if (seen[k]) continue;
    const auto node = static_cast<Index>(k);
    bool done = false;
    for (Index j : adj.row(k).cols) {
      if (seen[j]) {
        directed ? emit(node, j) : emit(j, node);
        done = true;
        break;
      }
    }
    if (!done && directed) {
      for (Index j : incoming[k]) {
        if (seen[j]) {
          emit(j, node);
          done = true;
          break;
        }
      }
    }
    if (!done && k + 1 < n && adj.at(k, k + 1) != 0.0) emit(node, node + 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (Index j : adj.row(i).cols) {
      if (directed || j > i) emit(static_cast<Index>(i), j);
    }
  }
}

void write_attributes(std::ostream& out, const AttributedGraph& graph) {
  const auto& a = graph.attributes();
  out << "@dim " << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    if (row.empty()) continue;
    out << graph.nodes().id(static_cast<Index>(i));
    for (std::size_t k = 0; k < row.size(); ++k) out << ' ' << row.cols[k] << ':' << detail::format_real(row.values[k]);
    out << '\n';
  }
}

void write_labels(std::ostream& out, const NodeIndex& nodes, const LabelSet& labels) {
  for (const auto& [node, label] : labels) out << nodes.id(node) << ' ' << label << '\n';
}

void write_samples(std::ostream& out, const NodeIndex& nodes, std::span<const EdgeSample> samples) {
  for (const auto& s : samples) {
    out << nodes.id(s.src) << ' ' << nodes.id(s.dst) << ' ' << (s.polarity == Polarity::kPositive ? 1 : 0);
    if (s.weight != 1.0) out << ' ' << detail::format_real(s.weight);
    out << '\n';
  }
}

// --- perturbation --------------------------------------------------------

Perturbation remove_links(const AttributedGraph& graph, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidArgument("remove fraction must lie in [0, 1]");
  const auto& adj = graph.adjacency();
  const bool directed = graph.directed();

  std::vector<EdgeSample> links;
  links.reserve(graph.num_links());
  for (std::size_t i = 0; i < adj.rows(); ++i) {
    const auto row = adj.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (directed || row.cols[k] > i) {
        links.push_back({static_cast<Index>(i), row.cols[k], Polarity::kPositive, row.values[k]});
      }
    }
  }
  // The small epsilon keeps e.g. 0.29 * 100 from flooring to 28.
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(links.size()) + 1e-9));

  Rng rng(derive_seed(seed, 0x72656d6fULL));
  // Partial Fisher-Yates: the first `count` slots become the removed set.
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + rng.below(links.size() - i);
    std::swap(links[i], links[j]);
  }
  std::vector<EdgeSample> removed(links.begin(), links.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(removed.begin(), removed.end(),
            [](const EdgeSample& a, const EdgeSample& b) { return pair_key(a.src, a.dst) < pair_key(b.src, b.dst); });

  std::unordered_set<std::uint64_t> drop;
  for (const auto& e : removed) {
    drop.insert(pair_key(e.src, e.dst));
    if (!directed) drop.insert(pair_key(e.dst, e.src));
  }
  std::vector<Triplet> kept;
  kept.reserve(adj.nnz());
  for (const auto& t : adj.triplets()) {
    if (!drop.contains(pair_key(t.row, t.col))) kept.push_back(t);
  }
  auto reduced = SparseMatrix::from_triplets(adj.rows(), adj.cols(), std::move(kept));
  return {graph.with_adjacency(std::move(reduced)), std::move(removed)};
}

AttributedGraph add_links(const AttributedGraph& graph, std::span<const EdgeSample> samples) {
  auto triplets = graph.adjacency().triplets();
  for (const auto& s : samples) {
    if (s.polarity != Polarity::kPositive) continue;
    triplets.push_back({s.src, s.dst, s.weight});
    if (!graph.directed()) triplets.push_back({s.dst, s.src, s.weight});
  }
  const std::size_t n = graph.num_nodes();
  return graph.with_adjacency(SparseMatrix::from_triplets(n, n, std::move(triplets)));
}

std::vector<EdgeSample> sample_negative_edges(const AttributedGraph& graph, std::size_t count, std::uint64_t seed) {
  std::vector<EdgeSample> out;
  if (count == 0) return out;
  const std::size_t n = graph.num_nodes();
  const bool directed = graph.directed();
  const std::uint64_t pairs = directed ? std::uint64_t{n} * (n - 1) : std::uint64_t{n} * (n - 1) / 2;
  const std::uint64_t available = n < 2 ? 0 : pairs - graph.num_links();
  if (count > available) {
    throw Error("cannot sample " + std::to_string(count) + " non-links: graph has only " +
                std::to_string(available));
  }

  Rng rng(derive_seed(seed, 0x6e656761ULL));
  std::unordered_set<std::uint64_t> chosen;
  const std::uint64_t budget = 100 * static_cast<std::uint64_t>(count) + 10000;
  for (std::uint64_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
    auto u = static_cast<Index>(rng.below(n));
    auto v = static_cast<Index>(rng.below(n));
    if (u == v) continue;
    if (!directed && u > v) std::swap(u, v);
    if (graph.has_link(u, v)) continue;
    if (!chosen.insert(pair_key(u, v)).second) continue;
    out.push_back({u, v, Polarity::kNegative});
  }
  if (out.size() < count) {
    throw Error("graph too dense: found only " + std::to_string(out.size()) + " of " + std::to_string(count) +
                " non-links within the attempt budget");
  }
  return out;
}

}  // namespace abrw
