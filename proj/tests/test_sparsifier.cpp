#include <doctest.h>

#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "csp/datasets.hpp"
#include "csp/errors.hpp"
#include "csp/metrics.hpp"
#include "csp/parallel.hpp"
#include "csp/sparsifier.hpp"
#include "support.hpp"

using namespace csp;

namespace {

SparsifyConfig with_tau(double tau, std::uint64_t seed = 0) {
  SparsifyConfig c;
  c.tau = tau;
  c.seed = seed;
  return c;
}

double edge_probability(const WeightedGraph& g, const Edge& e, const SparsifyConfig& c) {
  return union_probability(sample_probability(g, e.u, e.v, c), sample_probability(g, e.v, e.u, c));
}

}  // namespace

TEST_CASE("sample_probability") {
  SUBCASE("d_u = 20 and tau log n = 10 gives 0.5") {
    // star centre 0 with 20 unit leaves: d_0 = 20, n = 21
    std::vector<Edge> edges;
    for (NodeId v = 1; v <= 20; ++v) edges.push_back({0, v, 1.0});
    const auto g = WeightedGraph::from_edges(21, edges);
    const SparsifyConfig c = with_tau(10.0 / log_n(21, LogBase::binary));
    CHECK(sample_probability(g, 0, 7, c) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sample_probability(g, 7, 0, c) == 1.0);
  }
  SUBCASE("clamped at 1") {
    const auto g = testing::random_graph(15, 0.3, 2);
    const SparsifyConfig c = with_tau(100.0);
    for (const Edge& e : g.edges()) CHECK(sample_probability(g, e.u, e.v, c) == 1.0);
  }
  SUBCASE("K_3 with tau log n = 2") {
    const auto g = testing::complete_graph(3);
    for (LogBase b : {LogBase::binary, LogBase::natural}) {
      SparsifyConfig c = with_tau(2.0 / log_n(3, b));
      c.log_base = b;
      CHECK(sample_probability(g, 0, 1, c) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("errors") {
    const auto g = WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK_THROWS_AS(sample_probability(g, 0, 2, with_tau(1.0)), DomainError);
    CHECK_THROWS_AS(sample_probability(g, 0, 1, with_tau(0.0)), DomainError);
    CHECK_THROWS_AS(sample_probability(g, 0, 1, with_tau(-1.0)), DomainError);
  }
}

TEST_CASE("union_probability") {
  CHECK(union_probability(0.2, 0.5) == doctest::Approx(0.6).epsilon(1e-15));
  for (double q : {0.0, 0.3, 1.0}) CHECK(union_probability(1.0, q) == 1.0);
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    CHECK(union_probability(p, p) == doctest::Approx(2 * p - p * p).epsilon(1e-15));
    for (double q = 0.0; q <= 1.0; q += 0.1) {
      const double pe = union_probability(p, q);
      CHECK(pe >= std::max(p, q) - 1e-15);
      CHECK(pe <= std::min(p + q, 1.0) + 1e-15);
      CHECK(pe >= 0.5 * (p + q) - 1e-15);
    }
  }
  CHECK_THROWS_AS(union_probability(-0.1, 0.5), DomainError);
  CHECK_THROWS_AS(union_probability(0.5, 1.1), DomainError);
  CHECK_THROWS_AS(union_probability(std::nan(""), 0.5), DomainError);
}

TEST_CASE("saturated sampling returns the input graph") {
  const auto g = testing::random_graph(30, 0.3, 5);
  const SparsifierOutput out = sparsify(g, with_tau(1e6, 3));
  CHECK(out.h == g);
  CHECK(out.kept_edges == g.edge_count());
  CHECK(out.expected_edges == doctest::Approx(static_cast<double>(g.edge_count())));
}

TEST_CASE("sparsifier output invariants") {
  const auto g = testing::random_graph(120, 0.2, 7);
  SparsifyConfig c = with_tau(0.5, 11);
  c.record_probabilities = true;
  const SparsifierOutput out = sparsify(g, c);
  REQUIRE(out.edge_probability.has_value());
  CHECK(out.kept_edges == out.h.edge_count());
  CHECK(out.words_exchanged == out.kept_edges);
  CHECK(out.kept_edges < g.edge_count());
  CHECK(out.h.node_count() == g.node_count());
  double sum_p = 0.0;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edges()[i];
    const double p = edge_probability(g, e, c);
    CHECK((*out.edge_probability)[i] == doctest::Approx(p).epsilon(1e-15));
    sum_p += p;
  }
  CHECK(out.expected_edges == doctest::Approx(sum_p).epsilon(1e-12));
  for (const Edge& e : out.h.edges()) {
    REQUIRE(g.has_edge(e.u, e.v));
    const double w = g.weight(e.u, e.v);
    CHECK(e.w == doctest::Approx(w / edge_probability(g, {e.u, e.v, w}, c)).epsilon(1e-14));
  }
}

TEST_CASE("sparsify is deterministic and independent of thread count") {
  const auto g = testing::random_graph(300, 0.1, 13);
  const SparsifyConfig c = with_tau(0.7, 21);
  const std::size_t before = thread_count();
  set_thread_count(1);
  const SparsifierOutput a = sparsify(g, c);
  set_thread_count(4);
  const SparsifierOutput b = sparsify(g, c);
  set_thread_count(before);
  CHECK(a.h == b.h);
  CHECK(sparsify(g, with_tau(0.7, 22)).h != a.h);
}

TEST_CASE("sparsify ignores node relabeling beyond the relabeling itself") {
  // Draws are keyed by endpoint ids, so compare statistics instead of edges.
  const auto g = testing::random_graph(60, 0.3, 3);
  const auto perm = testing::random_permutation(60, 4);
  const auto pg = permute_nodes(g, perm);
  double ka = 0.0, kb = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    ka += static_cast<double>(sparsify(g, with_tau(0.4, s)).kept_edges);
    kb += static_cast<double>(sparsify(pg, with_tau(0.4, s)).kept_edges);
  }
  CHECK(sparsify(g, with_tau(0.4)).expected_edges == doctest::Approx(sparsify(pg, with_tau(0.4)).expected_edges));
  CHECK(std::abs(ka - kb) / 200.0 <= 6.0 * std::sqrt(sparsify(g, with_tau(0.4)).edge_count_variance / 100.0));
}

TEST_CASE("Monte-Carlo mean of sparsified weights is unbiased (1e4 trials, 2%)") {
  const auto g = testing::random_graph(20, 0.5, 1, 1.0, 2.0);
  // Pick tau so that every edge has p_e >= 0.7 while most remain below 1.
  double tau = 0.1;
  auto min_pe = [&](double t) {
    double m = 1.0;
    for (const Edge& e : g.edges()) m = std::min(m, edge_probability(g, e, with_tau(t)));
    return m;
  };
  while (min_pe(tau) < 0.7) tau += 0.05;
  std::size_t unsaturated = 0;
  for (const Edge& e : g.edges()) unsaturated += edge_probability(g, e, with_tau(tau)) < 1.0;
  REQUIRE(unsaturated >= g.edge_count() / 2);

  std::vector<double> sum(g.edge_count(), 0.0);
  const std::size_t trials = 10000;
  for (std::uint64_t s = 0; s < trials; ++s) {
    const SparsifierOutput out = sparsify(g, with_tau(tau, s));
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const Edge& e = g.edges()[i];
      if (out.h.has_edge(e.u, e.v)) sum[i] += out.h.weight(e.u, e.v);
    }
  }
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const double mean = sum[i] / trials;
    CHECK(std::abs(mean - g.edges()[i].w) / g.edges()[i].w <= 0.02);
  }
}

TEST_CASE("edge count matches the sum of p_e and the budget") {
  const auto g = testing::random_graph(200, 0.2, 17);
  const double tau = 0.5;
  const SparsifierOutput first = sparsify(g, with_tau(tau));
  double total = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) total += static_cast<double>(sparsify(g, with_tau(tau, s)).kept_edges);
  const double mean = total / 100.0;
  const double sigma = std::sqrt(first.edge_count_variance / 100.0);
  CHECK(std::abs(mean - first.expected_edges) <= 3.0 * sigma);
  CHECK(first.expected_edges <= 2.0 * 200 * tau * log_n(200, LogBase::binary));
}

TEST_CASE("weighted degrees concentrate when min degree >= tau log n") {
  const auto g = testing::random_graph(200, 0.5, 19, 1.0, 1.0, true);
  const double rate = 40.0;
  const double tau = rate / log_n(200, LogBase::binary);
  double min_deg = 1e300;
  for (NodeId v = 0; v < 200; ++v) min_deg = std::min(min_deg, g.degree(v));
  REQUIRE(min_deg >= rate);
  std::size_t failures = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const SparsifierOutput out = sparsify(g, with_tau(tau, s));
    bool ok = true;
    for (NodeId v = 0; v < 200; ++v) {
      const double ratio = out.h.degree(v) / g.degree(v);
      ok = ok && ratio >= 0.5 && ratio <= 2.0;
    }
    failures += !ok;
  }
  CHECK(failures <= 1);
}

TEST_CASE("lambda_{k+1} and cluster conductance survive sparsification") {
  const std::size_t k = 4;
  const auto g = testing::planted_partition(k, 100, 0.3, 0.01, 23);
  const Partition truth = testing::block_partition(k, 100);
  const double lambda_g = estimate_gap(g, k).lambda_k_plus_1;
  std::vector<double> phi_g(k);
  for (std::size_t i = 0; i < k; ++i) phi_g[i] = conductance(g, truth.members(static_cast<std::int32_t>(i)));

  std::size_t spectral_ok = 0, conductance_ok = 0;
  const std::size_t seeds = 30;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const SparsifierOutput out = sparsify(g, with_tau(1.0, s));
    if (out.h.isolated_count() == 0) {
      const double lambda_h = estimate_gap(out.h, k).lambda_k_plus_1;
      spectral_ok += lambda_h >= lambda_g / 3.0 && lambda_h <= 3.0 * lambda_g;
    }
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i) {
      const auto members = truth.members(static_cast<std::int32_t>(i));
      ok = ok && conductance(out.h, members) <= 8.0 * k * phi_g[i];
    }
    conductance_ok += ok;
  }
  CHECK(spectral_ok >= 28);
  CHECK(conductance_ok >= 28);
}

TEST_CASE("two K_100 joined by a bridge: the bridge is usually dropped") {
  const auto g = testing::bridged_cliques(100, 1);
  const Partition truth = testing::block_partition(2, 100);
  std::size_t dropped = 0, recovered = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const SparsifierOutput out = sparsify(g, with_tau(1.0, s));
    dropped += !out.h.has_edge(99, 100);
    if (connected_components(out.h).k() <= 2 && out.h.isolated_count() == 0)
      recovered += misclassification_ratio(spectral_cluster(out.h, 2, s), truth).err == 0.0;
  }
  CHECK(dropped >= 14);
  CHECK(recovered >= 18);
}

TEST_CASE("tau doubling search") {
  SUBCASE("disjoint cliques stop early with the sampled graph's gap") {
    const auto g = testing::disjoint_cliques(3, 20);
    const TauSearchResult r = tau_doubling_search(g, 3, 5);
    CHECK(r.tau <= 3.2);
    REQUIRE_FALSE(r.trace.empty());
    const TauStep& chosen = r.trace[r.trace.size() - 2];
    CHECK(chosen.tau == r.tau);
    CHECK(chosen.valid);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(testing::dense_laplacian_oracle(r.sparsifier.h));
    CHECK(chosen.gap == doctest::Approx(es.eigenvalues()(3) - es.eigenvalues()(2)).epsilon(1e-7));
    // A K_20 has lambda_2 = 20/19; the sampled cliques should sit near that.
    CHECK(chosen.gap > 0.5);
    CHECK(chosen.gap < 1.6);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].tau == doctest::Approx(2 * r.trace[i - 1].tau));
    CHECK(r.trace.front().tau == doctest::Approx(0.1));
  }
  SUBCASE("twomoons-style similarity graph stops at tau <= 2") {
    const PointCloud pc = gen_twomoons(400, 0.05, 3);
    const auto g = build_similarity_graph(pc, {0.1, 0.0});
    CHECK(tau_doubling_search(g, 2, 1).tau <= 2.0);
  }
  SUBCASE("unreachable stability fails once tau exceeds n") {
    // Two components asked for k = 1: the gap after the first eigenvalue is
    // zero on every sample, which never counts as stable.
    const auto g = testing::disjoint_cliques(2, 4);
    CHECK_THROWS_AS(tau_doubling_search(g, 1, 0), std::runtime_error);
  }
}
