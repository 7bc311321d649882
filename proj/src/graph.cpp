#include "netpool/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/math/distributions/binomial.hpp>
#include <fmt/core.h>

#include "netpool/error.hpp"
#include "netpool/rng.hpp"

namespace netpool {

Graph::Graph(std::size_t n) : n_(n), adj_(n * n, 0), neighbors_(n) {}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) {
    throw InvalidSize("graph must have at least one node");
  }
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.adj_[i * n + i] = 1;
  }
  for (auto [i, j] : edges) {
    if (i >= n || j >= n) {
      throw InvalidSize(fmt::format("edge ({}, {}) out of range for n={}", i + 1, j + 1, n));
    }
    if (i == j) continue;
    if (g.adj_[i * n + j] == 0) {
      g.adj_[i * n + j] = 1;
      g.adj_[j * n + i] = 1;
      ++g.edge_count_;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (g.adj_[i * n + j] != 0) g.neighbors_[i].push_back(j);
    }
  }
  return g;
}

std::vector<Graph::Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j : neighbors_[i]) {
      if (j > i) out.emplace_back(i, j);
    }
  }
  return out;
}

Eigen::MatrixXd Graph::adjacency_matrix() const {
  Eigen::MatrixXd a(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      a(i, j) = adj_[i * n_ + j];
    }
  }
  return a;
}

Graph make_star(std::size_t n) {
  if (n < 3) {
    throw InvalidSize(fmt::format("star requires n >= 3, got {}", n));
  }
  std::vector<Graph::Edge> edges;
  for (std::size_t j = 1; j < n; ++j) edges.emplace_back(0, j);
  return Graph::from_edges(n, edges);
}

Graph make_line(std::size_t n) {
  if (n < 2) {
    throw InvalidSize(fmt::format("line requires n >= 2, got {}", n));
  }
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

Graph make_d_regular(std::size_t n, std::size_t d) {
  if (d < 1 || d >= n) {
    throw InvalidSize(fmt::format("d-regular requires 1 <= d < n, got n={} d={}", n, d));
  }
  if ((n * d) % 2 != 0) {
    throw InvalidSize(fmt::format("d-regular requires n*d even, got n={} d={}", n, d));
  }
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= d / 2; ++k) {
      edges.emplace_back(i, (i + k) % n);
    }
    if (d % 2 == 1) {
      edges.emplace_back(i, (i + n / 2) % n);
    }
  }
  return Graph::from_edges(n, edges);
}

Graph make_ring(std::size_t n) {
  if (n < 3) {
    throw InvalidSize(fmt::format("ring requires n >= 3, got {}", n));
  }
  return make_d_regular(n, 2);
}

Graph make_complete(std::size_t n) {
  if (n == 1) return Graph::from_edges(1, {});
  return make_d_regular(n, n - 1);
}

Graph sample_poisson_graph(const DegreeParams& params, std::uint64_t seed) {
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw InvalidParameter(fmt::format("meeting probability p={} outside [0, 1]", params.p));
  }
  if (params.n == 0) {
    throw InvalidSize("random graph requires n >= 1");
  }
  const std::size_t n = params.n;
  rng::CounterStream stream(seed);
  std::vector<Graph::Edge> edges;
  std::uint64_t pair = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++pair) {
      const double u = static_cast<double>(stream.at(pair) >> 11) * 0x1.0p-53;
      if (u < params.p) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, edges);
}

double neighbor_count_pmf(const DegreeParams& params, std::size_t d) {
  if (params.n == 0 || d > params.n - 1) {
    throw DomainError(fmt::format("degree {} outside [0, {}]", d, params.n == 0 ? 0 : params.n - 1));
  }
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw InvalidParameter(fmt::format("meeting probability p={} outside [0, 1]", params.p));
  }
  if (params.n == 1) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(params.n - 1), params.p);
  return boost::math::pdf(dist, static_cast<double>(d));
}

double neighbor_degree_pmf(const DegreeParams& params, std::size_t d) {
  const double mean = params.expected_degree();
  if (!(mean > 0.0)) {
    throw DomainError("size-biased degree distribution undefined for <d> = 0");
  }
  if (d == 0) return 0.0;
  return neighbor_count_pmf(params, d) * static_cast<double>(d) / mean;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n=" << g.size() << '\n';
  for (auto [i, j] : g.edges()) {
    out << (i + 1) << ' ' << (j + 1) << '\n';
  }
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Graph::Edge> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!have_header) {
      long long parsed = 0;
      char extra = 0;
      if (std::sscanf(line.c_str(), " n=%lld %c", &parsed, &extra) != 1 || parsed < 1) {
        throw InvalidSize(fmt::format("line {}: expected header 'n=<int>'", line_no));
      }
      n = static_cast<std::size_t>(parsed);
      have_header = true;
      continue;
    }
    std::istringstream fields(line);
    long long i = 0;
    long long j = 0;
    std::string rest;
    if (!(fields >> i >> j) || (fields >> rest)) {
      throw InvalidSize(fmt::format("line {}: expected 'i j'", line_no));
    }
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n) {
      throw InvalidSize(fmt::format("line {}: node index out of range 1..{}", line_no, n));
    }
    edges.emplace_back(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  }
  if (!have_header) {
    throw InvalidSize("edge list is missing the 'n=<int>' header");
  }
  return Graph::from_edges(n, edges);
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  write_edge_list(g, out);
  if (!out) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  try {
    return read_edge_list(in);
  } catch (const InvalidSize& e) {
    throw InvalidSize(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace netpool
