#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "csp/graph.hpp"

namespace csp {

struct ErrReport {
  /// Fraction of nodes outside their matched part (unassigned nodes count as errors).
  double err = 0.0;
  /// matching[output part] = truth part, or -1 when the output part is unmatched.
  std::vector<std::int32_t> matching;
  /// Same count weighted by node volume (0 when no weights were given).
  double misclassified_volume = 0.0;
  double volume_fraction = 0.0;
};

/// err under the best one-to-one correspondence between output and truth
/// parts: exhaustive search over all maps when both sides have at most 8
/// parts, maximum-weight bipartite matching otherwise. `node_weight` (e.g.
/// degrees) drives the volume-weighted variant and may be empty.
ErrReport misclassification_ratio(const Partition& output, const Partition& truth,
                                  std::span<const double> node_weight = {});

ErrReport misclassification_ratio(const Partition& output, const Partition& truth, const WeightedGraph& g);

/// sum_i w(A_i, V \ A_i) / vol(A_i). Throws DomainError for unassigned nodes or
/// zero-volume parts.
double ncut(const WeightedGraph& g, const Partition& p);

/// Maximum-weight assignment on a rows x cols score matrix (row-major).
/// Returns the column for each row, -1 for rows left unmatched when rows > cols.
std::vector<std::int32_t> max_weight_matching(std::span<const double> score, std::size_t rows, std::size_t cols);

}  // namespace csp
