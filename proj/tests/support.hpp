#pragma once

// Graph fixtures and independent oracles shared by the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "csp/graph.hpp"

namespace csp::testing {

inline void add_clique(std::vector<Edge>& edges, NodeId first, NodeId size, double w = 1.0) {
  for (NodeId a = 0; a < size; ++a)
    for (NodeId b = a + 1; b < size; ++b) edges.push_back({first + a, first + b, w});
}

inline WeightedGraph complete_graph(NodeId n) {
  std::vector<Edge> edges;
  add_clique(edges, 0, n);
  return WeightedGraph::from_edges(n, edges);
}

/// `count` disjoint cliques of `size` nodes; clique c owns [c*size, (c+1)*size).
inline WeightedGraph disjoint_cliques(NodeId count, NodeId size) {
  std::vector<Edge> edges;
  for (NodeId c = 0; c < count; ++c) add_clique(edges, c * size, size);
  return WeightedGraph::from_edges(static_cast<std::size_t>(count) * size, edges);
}

inline Partition block_partition(std::size_t count, std::size_t size) {
  std::vector<std::int32_t> a(count * size);
  for (std::size_t v = 0; v < a.size(); ++v) a[v] = static_cast<std::int32_t>(v / size);
  return Partition(count, a);
}

/// Two cliques of `size` nodes joined by `bridges` edges (i, size + i).
inline WeightedGraph bridged_cliques(NodeId size, NodeId bridges = 1) {
  std::vector<Edge> edges;
  add_clique(edges, 0, size);
  add_clique(edges, size, size);
  for (NodeId i = 0; i < bridges; ++i) edges.push_back({i, size + i, 1.0});
  return WeightedGraph::from_edges(2 * static_cast<std::size_t>(size), edges);
}

/// Erdős–Rényi G(n, p) with U[wlo, whi] weights. Guarantees no isolated node
/// by attaching a Hamiltonian path when `connect` is set.
inline WeightedGraph random_graph(std::size_t n, double p, std::uint64_t seed, double wlo = 0.5, double whi = 2.0,
                                  bool connect = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> weight(wlo, whi);
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if ((connect && b == a + 1) || unit(rng) < p) edges.push_back({a, b, weight(rng)});
  return WeightedGraph::from_edges(n, edges);
}

/// Planted partition: k blocks of `size`, intra-block probability p_in, inter p_out.
inline WeightedGraph planted_partition(std::size_t k, std::size_t size, double p_in, double p_out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = k * size;
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (unit(rng) < (a / size == b / size ? p_in : p_out)) edges.push_back({a, b, 1.0});
  return WeightedGraph::from_edges(n, edges);
}

/// Disjoint union of graphs.
inline WeightedGraph disjoint_union(const std::vector<WeightedGraph>& parts) {
  std::vector<Edge> edges;
  NodeId offset = 0;
  for (const auto& g : parts) {
    for (const Edge& e : g.edges()) edges.push_back({e.u + offset, e.v + offset, e.w});
    offset += static_cast<NodeId>(g.node_count());
  }
  return WeightedGraph::from_edges(offset, edges);
}

/// Dense adjacency built straight from the edge list.
inline Eigen::MatrixXd dense_adjacency(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = e.w;
  return a;
}

/// I - D^{-1/2} A D^{-1/2} from the dense adjacency (independent of the library's builder).
inline Eigen::MatrixXd dense_laplacian_oracle(const WeightedGraph& g) {
  const Eigen::MatrixXd a = dense_adjacency(g);
  const Eigen::VectorXd d = a.rowwise().sum();
  const Eigen::VectorXd inv = d.array().sqrt().inverse();
  return Eigen::MatrixXd::Identity(a.rows(), a.cols()) - inv.asDiagonal() * a * inv.asDiagonal();
}

/// P^T x with P = I - L/2, by dense matrix powering.
inline Eigen::VectorXd dense_lazy_walk_power(const WeightedGraph& g, const Eigen::VectorXd& x, std::size_t rounds) {
  const Eigen::MatrixXd l = dense_laplacian_oracle(g);
  const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(l.rows(), l.cols()) - 0.5 * l;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(l.rows(), l.cols());
  for (std::size_t t = 0; t < rounds; ++t) power = power * p;
  return power * x;
}

inline std::vector<NodeId> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<NodeId>(i);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace csp::testing
