#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "csp/graph.hpp"
#include "csp/spectral.hpp"

namespace csp {

/// Base of the logarithm in the sampling rate tau * log n.
enum class LogBase { binary, natural };

double log_n(std::size_t n, LogBase base);

struct SparsifyConfig {
  double tau = 1.0;
  std::uint64_t seed = 0;
  LogBase log_base = LogBase::binary;
  /// Keep p_e for every input edge in SparsifierOutput::edge_probability.
  bool record_probabilities = false;
};

struct SparsifierOutput {
  WeightedGraph h;
  std::size_t kept_edges = 0;
  /// One word per kept edge: the endpoint(s) that sampled it notify the other side.
  std::size_t words_exchanged = 0;
  /// Sum over input edges of p_e, i.e. E[|F|].
  double expected_edges = 0.0;
  /// Sum over input edges of p_e (1 - p_e), i.e. Var[|F|].
  double edge_count_variance = 0.0;
  /// p_e indexed like g.edges(), present when requested.
  std::optional<std::vector<double>> edge_probability;
};

/// p_u(v) = min(w(u,v) * tau * log n / d_u, 1). Throws DomainError when {u,v}
/// is not an edge or tau <= 0.
double sample_probability(const WeightedGraph& g, NodeId u, NodeId v, const SparsifyConfig& cfg);

/// p_e = p + q - p q. Throws DomainError for inputs outside [0, 1].
double union_probability(double p_uv, double p_vu);

/// Each endpoint u of every edge {u,v} independently keeps the edge with
/// probability p_u(v); the edge enters H if either endpoint keeps it and is
/// reweighted to w / p_e. Draws come from a counter-based stream keyed by
/// (seed, min(u,v), max(u,v), endpoint), so the output does not depend on
/// edge order or thread count.
SparsifierOutput sparsify(const WeightedGraph& g, const SparsifyConfig& cfg);

/// Bernoulli draw of `endpoint` for edge {u, v}: a uniform value in [0, 1).
double endpoint_uniform(std::uint64_t seed, NodeId u, NodeId v, NodeId endpoint) noexcept;

struct TauSearchOptions {
  double start = 0.1;
  /// Stop when |gap(tau) - gap(2 tau)| < threshold * gap(2 tau).
  double relative_threshold = 0.1;
  /// Gaps at or below this count as "no gap" and never stabilize.
  double min_gap = 1e-8;
  LogBase log_base = LogBase::binary;
  EigenOptions eigen;
};

struct TauStep {
  double tau = 0.0;
  /// False when the sparsifier had isolated nodes (its Laplacian is undefined).
  bool valid = false;
  double gap = 0.0;
  std::size_t kept_edges = 0;
};

struct TauSearchResult {
  double tau = 0.0;
  SparsifierOutput sparsifier;
  std::vector<TauStep> trace;
};

/// Doubles tau from `start` until the spectral gap lambda_{k+1} - lambda_k of
/// the sparsifier stabilizes; returns the first stable tau and its sparsifier.
/// Throws std::runtime_error once tau exceeds n.
TauSearchResult tau_doubling_search(const WeightedGraph& g, std::size_t k, std::uint64_t seed,
                                    const TauSearchOptions& opts = {});

}  // namespace csp
