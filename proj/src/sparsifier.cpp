#include "csp/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "csp/errors.hpp"
#include "csp/parallel.hpp"
#include "csp/rng.hpp"

namespace csp {

double log_n(std::size_t n, LogBase base) {
  const double x = static_cast<double>(n);
  return base == LogBase::binary ? std::log2(x) : std::log(x);
}

namespace {

inline double endpoint_probability(double w, double degree, double rate) {
  return std::min(w * rate / degree, 1.0);
}

}  // namespace

double sample_probability(const WeightedGraph& g, NodeId u, NodeId v, const SparsifyConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw DomainError("tau must be positive");
  const double w = g.weight(u, v);
  if (!(w > 0.0)) throw DomainError("{" + std::to_string(u) + ", " + std::to_string(v) + "} is not an edge");
  return endpoint_probability(w, g.degree(u), cfg.tau * log_n(g.node_count(), cfg.log_base));
}

double union_probability(double p_uv, double p_vu) {
  if (!(p_uv >= 0.0 && p_uv <= 1.0 && p_vu >= 0.0 && p_vu <= 1.0))
    throw DomainError("sampling probabilities must lie in [0, 1]");
  return p_uv + p_vu - p_uv * p_vu;
}

double endpoint_uniform(std::uint64_t seed, NodeId u, NodeId v, NodeId endpoint) noexcept {
  const NodeId lo = std::min(u, v);
  const NodeId hi = std::max(u, v);
  const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
  return to_unit(mix64(mix64(seed ^ 0x5bd1e9955bd1e995ULL) ^ mix64(key) ^ (endpoint == lo ? 0x1ULL : 0x2ULL)));
}

SparsifierOutput sparsify(const WeightedGraph& g, const SparsifyConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw DomainError("tau must be positive");
  const auto edges = g.edges();
  const double rate = cfg.tau * log_n(g.node_count(), cfg.log_base);

  std::vector<double> prob(edges.size());
  std::vector<char> kept(edges.size());
  parallel_for(0, edges.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Edge& e = edges[i];
      const double pu = endpoint_probability(e.w, g.degree(e.u), rate);
      const double pv = endpoint_probability(e.w, g.degree(e.v), rate);
      prob[i] = pu + pv - pu * pv;
      // p = 1 always passes since the uniform lies in [0, 1).
      kept[i] = endpoint_uniform(cfg.seed, e.u, e.v, e.u) < pu || endpoint_uniform(cfg.seed, e.u, e.v, e.v) < pv;
    }
  }, 4096);

  SparsifierOutput out;
  std::vector<Edge> h_edges;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out.expected_edges += prob[i];
    out.edge_count_variance += prob[i] * (1.0 - prob[i]);
    if (kept[i]) h_edges.push_back({edges[i].u, edges[i].v, edges[i].w / prob[i]});
  }
  out.kept_edges = h_edges.size();
  out.words_exchanged = h_edges.size();
  out.h = WeightedGraph::from_edges(g.node_count(), std::move(h_edges));
  if (cfg.record_probabilities) out.edge_probability = std::move(prob);
  return out;
}

TauSearchResult tau_doubling_search(const WeightedGraph& g, std::size_t k, std::uint64_t seed,
                                    const TauSearchOptions& opts) {
  if (k == 0 || k + 1 > g.node_count()) throw DomainError("tau search needs 1 <= k < n");
  if (!(opts.start > 0.0)) throw DomainError("tau search must start at a positive tau");
  const double cap = static_cast<double>(g.node_count());

  struct Candidate {
    TauStep step;
    SparsifierOutput sparsifier;
  };
  auto evaluate = [&](double tau) {
    Candidate c;
    c.sparsifier = sparsify(g, {tau, seed, opts.log_base, false});
    c.step.tau = tau;
    c.step.kept_edges = c.sparsifier.kept_edges;
    c.step.valid = c.sparsifier.h.isolated_count() == 0;
    if (c.step.valid) {
      EigenOptions eig = opts.eigen;
      eig.seed = derive_seed(seed, {0x7a0});
      c.step.gap = estimate_gap(c.sparsifier.h, k, std::nullopt, eig).gap;
    }
    return c;
  };

  TauSearchResult result;
  double tau = opts.start;
  Candidate current = evaluate(tau);
  result.trace.push_back(current.step);
  while (true) {
    const double next_tau = 2.0 * tau;
    if (next_tau > cap)
      throw std::runtime_error("tau doubling search exceeded tau = n = " + std::to_string(g.node_count()) +
                               " without a stable spectral gap");
    Candidate next = evaluate(next_tau);
    result.trace.push_back(next.step);
    const bool stable = current.step.valid && next.step.valid && current.step.gap > opts.min_gap &&
                        next.step.gap > opts.min_gap &&
                        std::abs(current.step.gap - next.step.gap) < opts.relative_threshold * next.step.gap;
    if (stable) {
      result.tau = tau;
      result.sparsifier = std::move(current.sparsifier);
      return result;
    }
    tau = next_tau;
    current = std::move(next);
  }
}

}  // namespace csp
