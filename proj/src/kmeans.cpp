#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "csp/errors.hpp"
#include "csp/parallel.hpp"
#include "csp/rng.hpp"
#include "csp/simd/kernels.hpp"
#include "csp/spectral.hpp"

namespace csp {

namespace {

std::size_t distinct_rows(const RowMatrix& points) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(points.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  const auto dim = points.cols();
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < dim; ++c)
      if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
    return false;
  };
  std::sort(idx.begin(), idx.end(), less);
  std::size_t count = idx.empty() ? 0 : 1;
  for (std::size_t i = 1; i < idx.size(); ++i) count += less(idx[i - 1], idx[i]);
  return count;
}

struct Run {
  std::vector<std::int32_t> assignment;
  RowMatrix centers;
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<double> history;
};

// k-means++: first center uniform, then D^2-weighted sampling.
RowMatrix seed_centers(const RowMatrix& points, std::size_t k, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto dim = static_cast<std::size_t>(points.cols());
  const auto& kern = simd::kernels();
  RowMatrix centers(static_cast<Eigen::Index>(k), points.cols());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  centers.row(0) = points.row(static_cast<Eigen::Index>(pick(rng)));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = kern.squared_distance(points.row(i).data(), centers.row(0).data(), dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t chosen = 0;
    if (total > 0.0) {
      double target = unit(rng) * total;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0 && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
      while (d2[chosen] == 0.0 && chosen > 0) --chosen;
    }
    centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(chosen));
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], kern.squared_distance(points.row(i).data(), centers.row(c).data(), dim));
  }
  return centers;
}

Run lloyd(const RowMatrix& points, std::size_t k, const KMeansOptions& opts, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto dim = static_cast<std::size_t>(points.cols());
  const auto& kern = simd::kernels();
  std::mt19937_64 rng(seed);
  Run run;
  run.centers = seed_centers(points, k, rng);
  run.assignment.assign(n, -1);
  std::vector<double> dist(n);
  std::size_t retries = 0;

  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::int32_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = kern.squared_distance(points.row(i).data(), run.centers.row(c).data(), dim);
        if (d < best_d) {
          best_d = d;
          best = static_cast<std::int32_t>(c);
        }
      }
      changed |= run.assignment[i] != best;
      run.assignment[i] = best;
      dist[i] = best_d;
      inertia += best_d;
    }
    run.inertia = inertia;
    run.history.push_back(inertia);
    if (!changed) break;

    RowMatrix sums = RowMatrix::Zero(static_cast<Eigen::Index>(k), points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(run.assignment[i]) += points.row(static_cast<Eigen::Index>(i));
      ++counts[static_cast<std::size_t>(run.assignment[i])];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        run.centers.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: move its center onto the point farthest from its own center.
      if (++retries > opts.empty_cluster_retries)
        throw std::runtime_error("k-means: empty cluster persisted after " + std::to_string(opts.empty_cluster_retries) +
                                 " re-seeds");
      const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
      run.centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
      dist[far] = 0.0;
    }
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const RowMatrix& points, std::size_t k, const KMeansOptions& opts) {
  if (k == 0) throw DomainError("k-means needs k >= 1");
  if (points.rows() == 0) throw DomainError("k-means needs at least one point");
  if (const std::size_t distinct = distinct_rows(points); k > distinct)
    throw DomainError("k-means: k = " + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                      " distinct points");

  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  std::vector<Run> runs(restarts);
  parallel_for(0, restarts, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) runs[r] = lloyd(points, k, opts, derive_seed(opts.seed, {r}));
  }, 1);

  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (runs[r].inertia < runs[best].inertia) best = r;
  return {std::move(runs[best].assignment), std::move(runs[best].centers), runs[best].inertia,
          std::move(runs[best].history)};
}

}  // namespace csp
