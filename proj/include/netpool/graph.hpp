#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace netpool {

/// Undirected communication structure among n experts.
///
/// Adjacency is symmetric and always carries self-loops, so every expert
/// belongs to its own neighborhood and degree(i) >= 1. Degrees reported by
/// this class are self-inclusive. Nodes are 0-based in memory and 1-based in
/// every textual format.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  /// Builds a graph from off-diagonal edges (0-based, any orientation).
  /// Self-pairs and duplicates are tolerated and ignored.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return n_; }

  bool adjacent(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }

  /// Self-inclusive degree.
  std::size_t degree(std::size_t i) const { return neighbors_[i].size(); }

  /// Self-inclusive neighborhood, sorted ascending.
  std::span<const std::size_t> neighbors(std::size_t i) const { return neighbors_[i]; }

  /// Off-diagonal edges with i < j, lexicographic order.
  std::vector<Edge> edges() const;

  std::size_t edge_count() const noexcept { return edge_count_; }

  /// Dense 0/1 adjacency including the unit diagonal.
  Eigen::MatrixXd adjacency_matrix() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  explicit Graph(std::size_t n);

  std::size_t n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

/// Poisson (Erdos-Renyi) random graph parameters.
struct DegreeParams {
  std::size_t n = 0;
  double p = 0.0;

  /// (n - 1) p, counted without the self-loop.
  double expected_degree() const noexcept {
    return n == 0 ? 0.0 : static_cast<double>(n - 1) * p;
  }
};

Graph make_star(std::size_t n);
Graph make_line(std::size_t n);

/// Circulant graph where every node has d neighbors besides itself: the
/// floor(d/2) nearest on each side plus the antipode when d is odd.
Graph make_d_regular(std::size_t n, std::size_t d);
Graph make_ring(std::size_t n);
Graph make_complete(std::size_t n);

/// Links each unordered pair independently with probability p. The draw for
/// pair (i, j) is keyed by (seed, pair index), so the result is a pure
/// function of (params, seed).
Graph sample_poisson_graph(const DegreeParams& params, std::uint64_t seed);

/// Binomial(n - 1, p) probability of exactly d neighbors (self excluded).
double neighbor_count_pmf(const DegreeParams& params, std::size_t d);

/// Size-biased degree of a node reached along a random edge: P(d) d / <d>.
double neighbor_degree_pmf(const DegreeParams& params, std::size_t d);

// Edge-list text format: "n=<int>" then one "i j" line per edge, 1-based,
// i < j, self-loops implicit.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, const std::filesystem::path& path);
Graph read_edge_list(const std::filesystem::path& path);

}  // namespace netpool
