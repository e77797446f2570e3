#include <doctest.h>

#include <cmath>

#include "csp/distsim.hpp"
#include "csp/errors.hpp"
#include "support.hpp"

using namespace csp;

namespace {

DiffusionState state_from_seeds(const WeightedGraph& g, std::vector<NodeId> seeds) {
  DiffusionState st;
  st.seed_nodes = std::move(seeds);
  st.values = RowMatrix::Zero(static_cast<Eigen::Index>(g.node_count()), static_cast<Eigen::Index>(st.seed_nodes.size()));
  for (std::size_t i = 0; i < st.seed_nodes.size(); ++i)
    st.values(st.seed_nodes[i], static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(g.degree(st.seed_nodes[i]));
  return st;
}

DiffusionState run_rounds(const WeightedGraph& g, DiffusionState st, std::size_t rounds) {
  const NormalizedAdjacency adj(g);
  for (std::size_t t = 0; t < rounds; ++t) st = averaging_round(g, adj, st);
  return st;
}

SimConfig config(double beta, std::uint64_t seed) {
  SimConfig c;
  c.beta = beta;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("seed count parameters") {
  CHECK(expected_seed_count(config(0.5, 0)) == 12);  // ceil(8 / 0.5 * ln 2)
  SimConfig c = config(0.4, 0);
  c.seed_multiplier = 1.0;
  CHECK(expected_seed_count(c) == 3);  // ceil(2.5 * ln 2.5)
  CHECK(expected_seed_count(config(1.0, 0)) == 1);
  CHECK_THROWS_AS(expected_seed_count(config(0.0, 0)), DomainError);
  CHECK_THROWS_AS(expected_seed_count(config(1.5, 0)), DomainError);

  const auto g = testing::complete_graph(50);
  CHECK(resolve_rounds(g, config(0.5, 0)) == 4);  // ceil(ln 50)
  SimConfig hinted = config(0.5, 0);
  hinted.k_hint = 1;
  // lambda_2(K_50) = 50/49
  CHECK(resolve_rounds(g, hinted) == static_cast<std::size_t>(std::ceil(std::log(50.0) * 49.0 / 50.0)));
  SimConfig fixed = config(0.5, 0);
  fixed.rounds = 9;
  CHECK(resolve_rounds(g, fixed) == 9);
}

TEST_CASE("seeding on a regular graph uses probability s/n per node") {
  const auto g = testing::complete_graph(120);
  const SimConfig c = config(0.5, 0);
  const double sbar = static_cast<double>(expected_seed_count(c));
  std::vector<std::size_t> hits(120, 0);
  const std::size_t trials = 4000;
  for (std::uint64_t s = 0; s < trials; ++s)
    for (NodeId v : seeding(g, config(0.5, s)).seed_nodes) ++hits[v];
  const double p = sbar / 120.0;
  const double sd = std::sqrt(trials * p * (1 - p));
  for (std::size_t h : hits) CHECK(std::abs(static_cast<double>(h) - trials * p) <= 4.5 * sd);
}

TEST_CASE("E[s] equals s-bar over 1e4 trials") {
  const auto g = testing::random_graph(300, 0.05, 3);
  const SimConfig base = config(0.5, 0);
  const double sbar = static_cast<double>(expected_seed_count(base));
  double total = 0.0;
  const std::size_t trials = 10000;
  for (std::uint64_t s = 0; s < trials; ++s) total += static_cast<double>(seeding(g, config(0.5, s)).seed_count());
  CHECK(std::abs(total / trials - sbar) / sbar <= 0.03);
}

TEST_CASE("seeding hits both balanced cliques") {
  const auto g = testing::bridged_cliques(200, 5);
  std::size_t both = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const DiffusionState st = seeding(g, config(0.4, s));
    bool a = false, b = false;
    for (NodeId v : st.seed_nodes) (v < 200 ? a : b) = true;
    both += a && b;
  }
  CHECK(both >= 99);
}

TEST_CASE("seeding initial vectors and failures") {
  const auto g = testing::random_graph(80, 0.1, 4);
  const DiffusionState st = seeding(g, config(0.5, 8));
  REQUIRE(st.seed_count() > 0);
  CHECK(st.values.cols() == static_cast<Eigen::Index>(st.seed_count()));
  for (std::size_t i = 0; i < st.seed_count(); ++i) {
    const auto col = st.values.col(static_cast<Eigen::Index>(i));
    CHECK(col.sum() == doctest::Approx(1.0 / std::sqrt(g.degree(st.seed_nodes[i]))));
    CHECK(col(st.seed_nodes[i]) > 0.0);
  }
  CHECK(seeding(g, config(0.5, 8)).seed_nodes == st.seed_nodes);
  SimConfig starved = config(0.5, 1);
  starved.vol_estimate = 1e30;
  CHECK_THROWS_AS(seeding(g, starved), NoSeedsError);
}

TEST_CASE("averaging on a single edge reaches its fixed point in one round") {
  const auto g = WeightedGraph::from_edges(2, {{0, 1, 1.0}});
  DiffusionState st = state_from_seeds(g, {0});
  CHECK(st.values(0, 0) == 1.0);
  st = averaging_round(g, st);
  CHECK(st.values(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(st.values(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  for (int t = 0; t < 5; ++t) st = averaging_round(g, st);
  CHECK(st.values(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(st.values(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(st.round == 6);
}

TEST_CASE("D^{1/2} 1 is a fixed point of averaging") {
  const auto g = testing::random_graph(40, 0.2, 6);
  DiffusionState st;
  st.seed_nodes = {0};
  st.values.resize(40, 1);
  for (NodeId v = 0; v < 40; ++v) st.values(v, 0) = 3.0 * std::sqrt(g.degree(v));
  const DiffusionState next = averaging_round(g, st);
  CHECK((next.values - st.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("T averaging rounds equal dense P^T chi") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = testing::random_graph(20, 0.2, seed);
    const std::vector<NodeId> seeds{0, 7, 19};
    const std::size_t rounds = 3 + seed * 2;
    const DiffusionState st = run_rounds(g, state_from_seeds(g, seeds), rounds);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      Eigen::VectorXd chi = Eigen::VectorXd::Zero(20);
      chi(seeds[i]) = 1.0 / std::sqrt(g.degree(seeds[i]));
      const Eigen::VectorXd expect = testing::dense_lazy_walk_power(g, chi, rounds);
      CHECK((st.values.col(static_cast<Eigen::Index>(i)) - expect).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("query threshold") {
  const auto g = testing::complete_graph(5);
  const SimConfig c = config(0.5, 0);
  const double vol = g.volume();
  DiffusionState st;
  st.seed_nodes = {0, 1};
  st.values = RowMatrix::Zero(5, 2);
  for (NodeId v = 0; v < 4; ++v) st.values(v, 1) = std::sqrt(g.degree(v)) / (c.beta * vol);
  st.values(3, 0) = std::sqrt(g.degree(3)) / (2.0 * c.beta * vol);  // exactly the threshold
  st.values(2, 0) = 0.99 * std::sqrt(g.degree(2)) / (2.0 * c.beta * vol);
  const LabelAssignment a = query_labels(g, st, c);
  CHECK(a.label == std::vector<std::int32_t>{1, 1, 1, 0, LabelAssignment::kUnlabeled});
  CHECK(a.unlabeled_count() == 1);
}

TEST_CASE("disjoint cliques with one seed each label by clique") {
  const auto g = testing::disjoint_cliques(2, 15);
  const SimConfig c = config(0.5, 0);
  const DiffusionState st = run_rounds(g, state_from_seeds(g, {20, 3}), 60);
  const LabelAssignment a = query_labels(g, st, c);
  for (NodeId v = 0; v < 30; ++v) CHECK(a.label[v] == (v < 15 ? 1 : 0));
  // Mixed state on each component is chi_S / sqrt(vol S) scaled by the seed mass.
  for (NodeId v = 0; v < 15; ++v) CHECK(st.values(v, 1) == doctest::Approx(std::sqrt(14.0) / (15 * 14)).epsilon(1e-9));

  // Relabeling the seeds relabels the nodes the same way.
  const DiffusionState swapped = run_rounds(g, state_from_seeds(g, {3, 20}), 25);
  const LabelAssignment b = query_labels(g, swapped, c);
  for (NodeId v = 0; v < 30; ++v) CHECK(b.label[v] == 1 - a.label[v]);
}

TEST_CASE("mass never leaves the seed's component") {
  const auto g = testing::disjoint_union({testing::random_graph(25, 0.2, 1), testing::random_graph(30, 0.2, 2)});
  const DiffusionState st = run_rounds(g, state_from_seeds(g, {4, 40}), 40);
  for (NodeId v = 25; v < 55; ++v) CHECK(st.values(v, 0) == 0.0);
  for (NodeId v = 0; v < 25; ++v) CHECK(st.values(v, 1) == 0.0);
}

TEST_CASE("run_protocol transcript") {
  SUBCASE("words and invariants") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = testing::random_graph(150, 0.05, seed);
      SimConfig c = config(0.3, seed);
      c.rounds = 12;
      const SimTranscript tr = run_protocol(g, c);
      CHECK(tr.rounds == 12);
      CHECK(tr.total_words == 12 * 2 * g.edge_count() * tr.seed_count());
      REQUIRE(tr.words_per_round.size() == 12);
      for (std::size_t w : tr.words_per_round) CHECK(w == 2 * g.edge_count() * tr.seed_count());
      CHECK(tr.invariants.total() == 0);
      CHECK(tr.invariants.max_conservation_drift <= 1e-12);
      CHECK(tr.labels.label.size() == 150);
      CHECK(tr.unlabeled_count == tr.labels.unlabeled_count());
      CHECK_FALSE(tr.misclassified_volume.has_value());
    }
  }
  SUBCASE("disjoint cliques: zero misclassification whenever all are seeded") {
    const auto g = testing::disjoint_cliques(3, 30);
    const Partition truth = testing::block_partition(3, 30);
    std::size_t all_seeded = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SimConfig c = config(1.0 / 3.0, seed);
      c.rounds = 20;
      const SimTranscript tr = run_protocol(g, c, truth);
      bool seeded[3] = {false, false, false};
      for (NodeId v : tr.seed_nodes) seeded[v / 30] = true;
      if (seeded[0] && seeded[1] && seeded[2]) {
        ++all_seeded;
        CHECK(*tr.misclassified_volume == 0.0);
      }
    }
    CHECK(all_seeded >= 18);
  }
  SUBCASE("two K_200 with 5 bridges") {
    const auto g = testing::bridged_cliques(200, 5);
    const Partition truth = testing::block_partition(2, 200);
    std::size_t good = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SimTranscript tr = run_protocol(g, config(0.4, seed), truth);
      CHECK(tr.rounds == 6);
      CHECK(tr.invariants.total() == 0);
      good += *tr.misclassified_volume_fraction <= 0.01;
    }
    CHECK(good >= 18);
  }
}

TEST_CASE("misclassified volume uses the plurality label per cluster") {
  const auto g = testing::disjoint_cliques(2, 4);  // every degree is 3
  const Partition truth = testing::block_partition(2, 4);
  LabelAssignment a;
  a.label = {0, 0, 0, 1, 2, 2, LabelAssignment::kUnlabeled, 2};
  CHECK(misclassified_volume(g, a, truth) == doctest::Approx(6.0));
  a.label.pop_back();
  CHECK_THROWS_AS(misclassified_volume(g, a, truth), DomainError);
}
