#include "csp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "csp/errors.hpp"

namespace csp {

WeightedGraph WeightedGraph::from_edges(std::size_t n, std::vector<Edge> edges) {
  if (n > static_cast<std::size_t>(UINT32_MAX)) throw DomainError("node count exceeds 32-bit id range");
  std::erase_if(edges, [](const Edge& e) { return e.w == 0.0; });
  for (Edge& e : edges) {
    if (e.u >= n || e.v >= n)
      throw DomainError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") references a node outside [0, " +
                        std::to_string(n) + ")");
    if (e.u == e.v) throw DomainError("self-loop at node " + std::to_string(e.u));
    if (!std::isfinite(e.w) || e.w < 0.0)
      throw DomainError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") has invalid weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw DomainError("duplicate edge (" + std::to_string(edges[i].u) + ", " + std::to_string(edges[i].v) + ")");

  WeightedGraph g;
  g.edges_ = std::move(edges);
  g.row_ptr_.assign(n + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.row_ptr_[e.u + 1];
    ++g.row_ptr_[e.v + 1];
  }
  std::partial_sum(g.row_ptr_.begin(), g.row_ptr_.end(), g.row_ptr_.begin());
  g.adj_node_.resize(2 * g.edges_.size());
  g.adj_weight_.resize(2 * g.edges_.size());
  std::vector<std::size_t> cursor(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
  // Lexicographic edge order fills each row in ascending neighbour order:
  // first the neighbours v < u (edges (v, u) appear earlier), then v > u.
  for (const Edge& e : g.edges_) {
    g.adj_node_[cursor[e.v]] = e.u;
    g.adj_weight_[cursor[e.v]++] = e.w;
  }
  for (const Edge& e : g.edges_) {
    g.adj_node_[cursor[e.u]] = e.v;
    g.adj_weight_[cursor[e.u]++] = e.w;
  }
  g.degree_.assign(n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t j = g.row_ptr_[u]; j < g.row_ptr_[u + 1]; ++j) g.degree_[u] += g.adj_weight_[j];
  g.volume_ = std::accumulate(g.degree_.begin(), g.degree_.end(), 0.0);
  g.total_weight_ = 0.0;
  for (const Edge& e : g.edges_) g.total_weight_ += e.w;
  return g;
}

double WeightedGraph::weight(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return 0.0;
  const auto nbrs = neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return adj_weight_[row_ptr_[u] + static_cast<std::size_t>(it - nbrs.begin())];
}

std::size_t WeightedGraph::isolated_count() const noexcept {
  std::size_t count = 0;
  for (std::size_t u = 0; u < node_count(); ++u) count += row_ptr_[u] == row_ptr_[u + 1];
  return count;
}

Partition::Partition(std::size_t k, std::vector<std::int32_t> assignment) : k_(k), assignment_(std::move(assignment)) {
  if (k_ == 0) throw DomainError("partition needs k >= 1");
  for (std::int32_t a : assignment_)
    if (a != kUnassigned && (a < 0 || static_cast<std::size_t>(a) >= k_))
      throw DomainError("part index " + std::to_string(a) + " outside [0, " + std::to_string(k_) + ")");
}

Partition Partition::from_labels(std::vector<std::int32_t> assignment) {
  std::int32_t top = 0;
  for (std::int32_t a : assignment) top = std::max(top, a);
  return Partition(static_cast<std::size_t>(top) + 1, std::move(assignment));
}

bool Partition::fully_assigned() const noexcept {
  return std::none_of(assignment_.begin(), assignment_.end(), [](std::int32_t a) { return a == kUnassigned; });
}

std::vector<std::size_t> Partition::part_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (std::int32_t a : assignment_)
    if (a != kUnassigned) ++sizes[static_cast<std::size_t>(a)];
  return sizes;
}

std::vector<NodeId> Partition::members(std::size_t part) const {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < assignment_.size(); ++v)
    if (assignment_[v] == static_cast<std::int32_t>(part)) out.push_back(static_cast<NodeId>(v));
  return out;
}

std::vector<char> membership_mask(std::size_t n, std::span<const NodeId> nodes) {
  std::vector<char> mask(n, 0);
  for (NodeId v : nodes) {
    if (v >= n) throw DomainError("node " + std::to_string(v) + " outside the graph");
    mask[v] = 1;
  }
  return mask;
}

double cut_weight(const WeightedGraph& g, std::span<const char> in_set) {
  if (in_set.size() != g.node_count()) throw DomainError("membership mask size does not match node count");
  double cut = 0.0;
  for (const Edge& e : g.edges())
    if ((in_set[e.u] != 0) != (in_set[e.v] != 0)) cut += e.w;
  return cut;
}

double cut_weight(const WeightedGraph& g, std::span<const NodeId> nodes) {
  return cut_weight(g, membership_mask(g.node_count(), nodes));
}

double volume(const WeightedGraph& g, std::span<const char> in_set) {
  if (in_set.size() != g.node_count()) throw DomainError("membership mask size does not match node count");
  double vol = 0.0;
  for (std::size_t v = 0; v < in_set.size(); ++v)
    if (in_set[v] != 0) vol += g.degree(static_cast<NodeId>(v));
  return vol;
}

double volume(const WeightedGraph& g, std::span<const NodeId> nodes) {
  return volume(g, membership_mask(g.node_count(), nodes));
}

double conductance(const WeightedGraph& g, std::span<const char> in_set) {
  const double vol = volume(g, in_set);
  if (!(vol > 0.0)) throw DomainError("conductance of an empty or zero-volume set is undefined");
  return cut_weight(g, in_set) / vol;
}

double conductance(const WeightedGraph& g, std::span<const NodeId> nodes) {
  return conductance(g, membership_mask(g.node_count(), nodes));
}

PartCuts part_cuts(const WeightedGraph& g, const Partition& p) {
  if (p.node_count() != g.node_count()) throw DomainError("partition size does not match node count");
  PartCuts out{std::vector<double>(p.k(), 0.0), std::vector<double>(p.k(), 0.0)};
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (p[v] != Partition::kUnassigned) out.volume[static_cast<std::size_t>(p[v])] += g.degree(static_cast<NodeId>(v));
  for (const Edge& e : g.edges()) {
    const std::int32_t a = p[e.u];
    const std::int32_t b = p[e.v];
    if (a == b) continue;
    if (a != Partition::kUnassigned) out.cut[static_cast<std::size_t>(a)] += e.w;
    if (b != Partition::kUnassigned) out.cut[static_cast<std::size_t>(b)] += e.w;
  }
  return out;
}

double partition_max_conductance(const WeightedGraph& g, const Partition& p) {
  if (!p.fully_assigned()) throw DomainError("partition must assign every node");
  const PartCuts pc = part_cuts(g, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.k(); ++i) {
    if (!(pc.volume[i] > 0.0)) throw DomainError("part " + std::to_string(i) + " has zero volume");
    worst = std::max(worst, pc.cut[i] / pc.volume[i]);
  }
  return worst;
}

Partition connected_components(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::int32_t> label(n, Partition::kUnassigned);
  std::vector<NodeId> stack;
  std::int32_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != Partition::kUnassigned) continue;
    label[s] = next;
    stack.push_back(static_cast<NodeId>(s));
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u))
        if (label[v] == Partition::kUnassigned) {
          label[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  return Partition(std::max<std::size_t>(1, static_cast<std::size_t>(next)), std::move(label));
}

WeightedGraph permute_nodes(const WeightedGraph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.node_count()) throw DomainError("permutation size does not match node count");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.w});
  return WeightedGraph::from_edges(g.node_count(), std::move(edges));
}

}  // namespace csp
