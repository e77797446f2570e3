#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "csp/simd/kernels.hpp"

namespace csp {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected weighted graph on dense node ids [0, n).
///
/// Edges are stored once with u < v, sorted lexicographically; adjacency is
/// mirrored into CSR form so every node can iterate its neighbours. Self-loops,
/// duplicate pairs and negative or non-finite weights are rejected at
/// construction, zero-weight edges are dropped.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Throws DomainError on invalid input.
  static WeightedGraph from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return degree_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const double> degrees() const noexcept { return degree_; }
  double degree(NodeId u) const { return degree_[u]; }

  /// vol(V) = sum of degrees = 2 * total edge weight.
  double volume() const noexcept { return volume_; }
  double total_weight() const noexcept { return total_weight_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adj_node_.data() + row_ptr_[u], adj_node_.data() + row_ptr_[u + 1]};
  }
  std::span<const double> neighbor_weights(NodeId u) const {
    return {adj_weight_.data() + row_ptr_[u], adj_weight_.data() + row_ptr_[u + 1]};
  }

  /// Weight of {u, v}; 0 when absent.
  double weight(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return weight(u, v) > 0.0; }

  std::size_t isolated_count() const noexcept;

  /// Adjacency in CSR form; neighbours of each row sorted ascending.
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  simd::CsrView adjacency_csr() const noexcept {
    return {row_ptr_.data(), adj_node_.data(), adj_weight_.data()};
  }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.node_count() == b.node_count() && a.edges_ == b.edges_;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<double> degree_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> adj_node_;
  std::vector<double> adj_weight_;
  double volume_ = 0.0;
  double total_weight_ = 0.0;
};

/// A k-way node partition. Part ids are 0-based; kUnassigned marks nodes
/// without a part.
class Partition {
 public:
  static constexpr std::int32_t kUnassigned = -1;

  Partition() = default;
  /// Throws DomainError if k == 0 or any id lies outside [0, k) and is not kUnassigned.
  Partition(std::size_t k, std::vector<std::int32_t> assignment);

  /// Uses max id + 1 as k.
  static Partition from_labels(std::vector<std::int32_t> assignment);

  std::size_t k() const noexcept { return k_; }
  std::size_t node_count() const noexcept { return assignment_.size(); }
  std::int32_t operator[](std::size_t v) const { return assignment_[v]; }
  std::span<const std::int32_t> assignment() const noexcept { return assignment_; }

  bool fully_assigned() const noexcept;
  std::vector<std::size_t> part_sizes() const;
  std::vector<NodeId> members(std::size_t part) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::size_t k_ = 1;
  std::vector<std::int32_t> assignment_;
};

/// Membership mask helper: mask[v] != 0 iff v in the set.
std::vector<char> membership_mask(std::size_t n, std::span<const NodeId> nodes);

/// w(S, V \ S).
double cut_weight(const WeightedGraph& g, std::span<const char> in_set);
double cut_weight(const WeightedGraph& g, std::span<const NodeId> nodes);

double volume(const WeightedGraph& g, std::span<const char> in_set);
double volume(const WeightedGraph& g, std::span<const NodeId> nodes);

/// phi(S) = w(S, V \ S) / vol(S). Throws DomainError for empty or zero-volume S.
double conductance(const WeightedGraph& g, std::span<const char> in_set);
double conductance(const WeightedGraph& g, std::span<const NodeId> nodes);

/// Per-part cut weights and volumes in one pass over the edges.
struct PartCuts {
  std::vector<double> cut;
  std::vector<double> volume;
};
PartCuts part_cuts(const WeightedGraph& g, const Partition& p);

/// max_i phi(A_i) over the parts of a given partition. Throws DomainError when
/// p is not fully assigned or some part has zero volume.
double partition_max_conductance(const WeightedGraph& g, const Partition& p);

/// Connected-component labels (0-based, in order of smallest member).
Partition connected_components(const WeightedGraph& g);

/// Relabel nodes: node v becomes perm[v].
WeightedGraph permute_nodes(const WeightedGraph& g, std::span<const NodeId> perm);

// Edge-list text format: header "n m", then m lines "u v w".

WeightedGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedGraph& g);
WeightedGraph read_edge_list_file(const std::filesystem::path& path);
void write_edge_list_file(const std::filesystem::path& path, const WeightedGraph& g);

// Label files: optional header line, then "node,part" rows. Part -1 means unassigned.

Partition read_partition(std::istream& in, std::size_t n);
void write_partition(std::ostream& out, const Partition& p, std::string_view header = "node,part");
Partition read_partition_file(const std::filesystem::path& path, std::size_t n);
void write_partition_file(const std::filesystem::path& path, const Partition& p,
                          std::string_view header = "node,part");

}  // namespace csp
