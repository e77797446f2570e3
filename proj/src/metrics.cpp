#include "csp/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "csp/errors.hpp"

namespace csp {

namespace {

constexpr std::size_t kExhaustiveLimit = 8;

// Hungarian algorithm (shortest augmenting path, potentials) minimizing cost
// on an n x n matrix. Returns the column assigned to each row.
std::vector<std::size_t> hungarian_min(const std::vector<double>& cost, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Best injective map by enumerating permutations of a padded square matrix.
std::vector<std::int32_t> exhaustive_matching(std::span<const double> score, std::size_t rows, std::size_t cols) {
  const std::size_t n = std::max(rows, cols);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  std::vector<std::size_t> best_perm = perm;
  do {
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
      if (perm[r] < cols) total += score[r * cols + perm[r]];
    if (total > best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<std::int32_t> out(rows, -1);
  for (std::size_t r = 0; r < rows; ++r)
    if (best_perm[r] < cols) out[r] = static_cast<std::int32_t>(best_perm[r]);
  return out;
}

}  // namespace

std::vector<std::int32_t> max_weight_matching(std::span<const double> score, std::size_t rows, std::size_t cols) {
  if (score.size() != rows * cols) throw DomainError("score matrix size mismatch");
  const std::size_t n = std::max(rows, cols);
  double top = 0.0;
  for (double s : score) top = std::max(top, s);
  std::vector<double> cost(n * n, top);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) cost[r * n + c] = top - score[r * cols + c];
  const auto assignment = hungarian_min(cost, n);
  std::vector<std::int32_t> out(rows, -1);
  for (std::size_t r = 0; r < rows; ++r)
    if (assignment[r] < cols) out[r] = static_cast<std::int32_t>(assignment[r]);
  return out;
}

ErrReport misclassification_ratio(const Partition& output, const Partition& truth, std::span<const double> node_weight) {
  const std::size_t n = truth.node_count();
  if (output.node_count() != n) throw DomainError("output and truth cover different node sets");
  if (!node_weight.empty() && node_weight.size() != n) throw DomainError("node weights do not match node count");
  if (n == 0) return {};

  const std::size_t ko = output.k();
  const std::size_t kt = truth.k();
  std::vector<double> count(ko * kt, 0.0);
  std::vector<double> vol(ko * kt, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (output[v] == Partition::kUnassigned || truth[v] == Partition::kUnassigned) continue;
    const std::size_t cell = static_cast<std::size_t>(output[v]) * kt + static_cast<std::size_t>(truth[v]);
    count[cell] += 1.0;
    vol[cell] += node_weight.empty() ? 0.0 : node_weight[v];
  }

  ErrReport rep;
  rep.matching = std::max(ko, kt) <= kExhaustiveLimit ? exhaustive_matching(count, ko, kt)
                                                      : max_weight_matching(count, ko, kt);
  double agree = 0.0;
  double agree_vol = 0.0;
  for (std::size_t o = 0; o < ko; ++o) {
    if (rep.matching[o] < 0) continue;
    agree += count[o * kt + static_cast<std::size_t>(rep.matching[o])];
    agree_vol += vol[o * kt + static_cast<std::size_t>(rep.matching[o])];
  }
  rep.err = 1.0 - agree / static_cast<double>(n);
  if (!node_weight.empty()) {
    const double total = std::accumulate(node_weight.begin(), node_weight.end(), 0.0);
    rep.misclassified_volume = total - agree_vol;
    rep.volume_fraction = total > 0.0 ? rep.misclassified_volume / total : 0.0;
  }
  return rep;
}

ErrReport misclassification_ratio(const Partition& output, const Partition& truth, const WeightedGraph& g) {
  return misclassification_ratio(output, truth, g.degrees());
}

double ncut(const WeightedGraph& g, const Partition& p) {
  if (!p.fully_assigned()) throw DomainError("ncut needs every node assigned");
  const PartCuts pc = part_cuts(g, p);
  double total = 0.0;
  for (std::size_t i = 0; i < p.k(); ++i) {
    if (!(pc.volume[i] > 0.0)) throw DomainError("part " + std::to_string(i) + " has zero volume");
    total += pc.cut[i] / pc.volume[i];
  }
  return total;
}

}  // namespace csp
