#pragma once

// Round-synchronous simulation of the distributed clustering protocol:
// degree-proportional seeding, T lazy-diffusion averaging rounds, and a
// thresholded query that labels every node with the smallest seed index whose
// diffused mass at the node clears sqrt(d_v) / (2 beta vol(V)).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "csp/graph.hpp"
#include "csp/spectral.hpp"

namespace csp {

struct SimConfig {
  /// Lower bound on cluster volume as a fraction of vol(V), in (0, 1].
  double beta = 0.5;
  /// When set and `rounds` is not, T = ceil(round_multiplier * ln n / lambda_{k+1}).
  std::optional<std::size_t> k_hint;
  /// Explicit T. Without it and without k_hint, T = ceil(ln n).
  std::optional<std::size_t> rounds;
  double round_multiplier = 1.0;
  /// s̄ = ceil(seed_multiplier / beta * ln(1 / beta)), at least 1.
  double seed_multiplier = 8.0;
  std::uint64_t seed = 0;
  /// vol(V) as known to the nodes; exact when unset.
  std::optional<double> vol_estimate;
  /// Track conservation / monotonicity / non-negativity every round.
  bool check_invariants = true;
};

/// s̄ for a config. Throws DomainError on an invalid beta or multiplier.
std::size_t expected_seed_count(const SimConfig& cfg);

/// T for a config on graph g.
std::size_t resolve_rounds(const WeightedGraph& g, const SimConfig& cfg);

/// Per-vector diffusion state, stored node-major: values(v, i) = x^{(t,i)}(v).
struct DiffusionState {
  std::vector<NodeId> seed_nodes;
  RowMatrix values;
  std::size_t round = 0;
  std::size_t words_exchanged = 0;

  std::size_t seed_count() const noexcept { return seed_nodes.size(); }
};

/// Each node becomes active independently with probability min(s̄ d_v / vol(V), 1);
/// active node v_i starts vector i at chi_{v_i}. Throws NoSeedsError when
/// nobody activates.
DiffusionState seeding(const WeightedGraph& g, const SimConfig& cfg);

/// Counts invariant breaches observed between consecutive rounds.
struct InvariantMonitor {
  std::size_t conservation_violations = 0;
  std::size_t norm_increase_violations = 0;
  std::size_t negativity_violations = 0;
  double max_conservation_drift = 0.0;

  std::size_t total() const noexcept {
    return conservation_violations + norm_increase_violations + negativity_violations;
  }
};

/// One synchronous application of P = I - L/2 to every vector. Round-t values
/// depend only on round-(t-1) values. Adds 2 m s words.
DiffusionState averaging_round(const WeightedGraph& g, const NormalizedAdjacency& adj, const DiffusionState& st);
DiffusionState averaging_round(const WeightedGraph& g, const DiffusionState& st);

struct LabelAssignment {
  static constexpr std::int32_t kUnlabeled = -1;
  /// 0-based seed index per node, or kUnlabeled.
  std::vector<std::int32_t> label;

  std::size_t unlabeled_count() const noexcept;
};

LabelAssignment query_labels(const WeightedGraph& g, const DiffusionState& st, const SimConfig& cfg);

struct SimTranscript {
  SimConfig config;
  std::size_t rounds = 0;
  std::size_t expected_seeds = 0;
  std::vector<NodeId> seed_nodes;
  std::vector<std::size_t> words_per_round;
  std::size_t total_words = 0;
  LabelAssignment labels;
  std::size_t unlabeled_count = 0;
  std::optional<double> misclassified_volume;
  std::optional<double> misclassified_volume_fraction;
  InvariantMonitor invariants;

  std::size_t seed_count() const noexcept { return seed_nodes.size(); }
};

/// Volume of nodes whose label disagrees with their cluster's plurality label
/// (plurality by volume), plus the volume of unlabeled nodes.
double misclassified_volume(const WeightedGraph& g, const LabelAssignment& labels, const Partition& truth);

/// Seeding, T averaging rounds, query. Throws NoSeedsError.
SimTranscript run_protocol(const WeightedGraph& g, const SimConfig& cfg,
                           const std::optional<Partition>& ground_truth = {});

}  // namespace csp
