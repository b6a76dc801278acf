#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pgir {

using Vertex = std::int64_t;
using Edge = std::pair<Vertex, Vertex>;

/// Undirected simple graph without isolated vertices.
///
/// Edges are stored normalized (first < second) and sorted, so two graphs
/// with the same edge set compare equal regardless of input order.
class Graph {
public:
  /// Validates and normalizes. Duplicate edges (in either orientation) are
  /// merged; self-loops, out-of-range endpoints and isolated vertices throw.
  Graph(Vertex n, std::vector<Edge> edges);

  Vertex order() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// 64-bit FNV-1a over the vertex count and the sorted edge list.
  std::uint64_t content_hash() const noexcept;

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  Vertex n_;
  std::vector<Edge> edges_;
};

/// Dense symmetric matrix. Construction rejects any asymmetric entry.
class SymmetricMatrix {
public:
  explicit SymmetricMatrix(Eigen::MatrixXd entries);

  Eigen::Index order() const noexcept { return entries_.rows(); }
  const Eigen::MatrixXd& dense() const noexcept { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
  Eigen::MatrixXd entries_;
};

/// G(n, M) random graph: exactly `m` distinct edges drawn uniformly. Redraws
/// until no vertex is isolated, giving up after `max_attempts`.
Graph erdos_renyi(Vertex n, std::size_t m, std::uint64_t seed, int max_attempts = 1000);

/// Parses the edge-list format: "u v" per line, '#' comment lines, optional
/// leading "n <count>" directive. Indices are 0-based.
Graph load_edge_list(std::string_view text);

/// Writes the `n <count>` directive followed by one edge per line.
/// `comments` are emitted first as '#' lines.
std::string format_edge_list(const Graph& g, const std::vector<std::string>& comments = {});

std::vector<std::int64_t> degrees(const Graph& g);

/// D^{-1/2} (D - A) D^{-1/2}.
SymmetricMatrix normalized_laplacian(const Graph& g);

} // namespace pgir
