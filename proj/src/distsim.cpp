#include "csp/distsim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "csp/errors.hpp"
#include "csp/rng.hpp"

namespace csp {

namespace {

constexpr double kConservationTolerance = 1e-10;
constexpr double kNormSlack = 1e-12;

void validate(const SimConfig& cfg) {
  if (!(cfg.beta > 0.0 && cfg.beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  if (!(cfg.seed_multiplier > 0.0)) throw DomainError("seed multiplier must be positive");
  if (!(cfg.round_multiplier > 0.0)) throw DomainError("round multiplier must be positive");
  if (cfg.rounds && *cfg.rounds == 0) throw DomainError("T must be at least 1");
  if (cfg.vol_estimate && !(*cfg.vol_estimate > 0.0)) throw DomainError("volume estimate must be positive");
}

double node_volume(const WeightedGraph& g, const SimConfig& cfg) {
  return cfg.vol_estimate ? *cfg.vol_estimate : g.volume();
}

struct VectorStats {
  std::vector<double> measure;  // sum_v sqrt(d_v) x(v)
  std::vector<double> norm;
  std::size_t negatives = 0;
};

VectorStats vector_stats(const NormalizedAdjacency& adj, const RowMatrix& values) {
  VectorStats s;
  const auto cols = static_cast<std::size_t>(values.cols());
  s.measure.assign(cols, 0.0);
  s.norm.assign(cols, 0.0);
  const auto sqrt_d = adj.sqrt_degree();
  for (Eigen::Index v = 0; v < values.rows(); ++v)
    for (std::size_t i = 0; i < cols; ++i) {
      const double x = values(v, static_cast<Eigen::Index>(i));
      s.measure[i] += sqrt_d[static_cast<std::size_t>(v)] * x;
      s.norm[i] += x * x;
      s.negatives += x < 0.0;
    }
  for (double& n : s.norm) n = std::sqrt(n);
  return s;
}

void record(InvariantMonitor& mon, const VectorStats& before, const VectorStats& after) {
  mon.negativity_violations += after.negatives;
  for (std::size_t i = 0; i < before.measure.size(); ++i) {
    const double drift = std::abs(after.measure[i] - before.measure[i]) / std::max(std::abs(before.measure[i]), 1e-300);
    mon.max_conservation_drift = std::max(mon.max_conservation_drift, drift);
    mon.conservation_violations += drift > kConservationTolerance;
    mon.norm_increase_violations += after.norm[i] > before.norm[i] * (1.0 + kNormSlack);
  }
}

}  // namespace

std::size_t expected_seed_count(const SimConfig& cfg) {
  validate(cfg);
  const double sbar = std::ceil(cfg.seed_multiplier / cfg.beta * std::log(1.0 / cfg.beta));
  return std::max<std::size_t>(1, static_cast<std::size_t>(sbar));
}

std::size_t resolve_rounds(const WeightedGraph& g, const SimConfig& cfg) {
  validate(cfg);
  if (cfg.rounds) return *cfg.rounds;
  const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(g.node_count(), 2)));
  if (cfg.k_hint) {
    EigenOptions eig;
    eig.seed = derive_seed(cfg.seed, {0x7});
    const double lambda = estimate_gap(g, *cfg.k_hint, std::nullopt, eig).lambda_k_plus_1;
    if (lambda > 0.0) return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.round_multiplier * ln_n / lambda)));
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ln_n)));
}

DiffusionState seeding(const WeightedGraph& g, const SimConfig& cfg) {
  const double sbar = static_cast<double>(expected_seed_count(cfg));
  const double vol = node_volume(g, cfg);
  std::mt19937_64 rng(derive_seed(cfg.seed, {0x5eed}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DiffusionState st;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const double p = std::min(sbar * g.degree(static_cast<NodeId>(v)) / vol, 1.0);
    if (unit(rng) < p) st.seed_nodes.push_back(static_cast<NodeId>(v));
  }
  if (st.seed_nodes.empty()) throw NoSeedsError("seeding activated no node; retry with another seed");
  st.values = RowMatrix::Zero(static_cast<Eigen::Index>(g.node_count()), static_cast<Eigen::Index>(st.seed_nodes.size()));
  for (std::size_t i = 0; i < st.seed_nodes.size(); ++i) {
    const NodeId v = st.seed_nodes[i];
    st.values(v, static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(g.degree(v));
  }
  return st;
}

DiffusionState averaging_round(const WeightedGraph& g, const NormalizedAdjacency& adj, const DiffusionState& st) {
  DiffusionState next;
  next.seed_nodes = st.seed_nodes;
  next.round = st.round + 1;
  next.values.resize(st.values.rows(), st.values.cols());
  const auto width = static_cast<std::size_t>(st.values.cols());
  adj.multiply(st.values.data(), next.values.data(), width);
  simd::kernels().axpby(0.5, st.values.data(), 0.5, next.values.data(), static_cast<std::size_t>(st.values.size()));
  next.words_exchanged = st.words_exchanged + 2 * g.edge_count() * width;
  return next;
}

DiffusionState averaging_round(const WeightedGraph& g, const DiffusionState& st) {
  return averaging_round(g, NormalizedAdjacency(g), st);
}

std::size_t LabelAssignment::unlabeled_count() const noexcept {
  return static_cast<std::size_t>(std::count(label.begin(), label.end(), kUnlabeled));
}

LabelAssignment query_labels(const WeightedGraph& g, const DiffusionState& st, const SimConfig& cfg) {
  validate(cfg);
  const double vol = node_volume(g, cfg);
  LabelAssignment out;
  out.label.assign(g.node_count(), LabelAssignment::kUnlabeled);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const double threshold = std::sqrt(g.degree(static_cast<NodeId>(v))) / (2.0 * cfg.beta * vol);
    for (Eigen::Index i = 0; i < st.values.cols(); ++i)
      if (st.values(static_cast<Eigen::Index>(v), i) >= threshold && st.values(static_cast<Eigen::Index>(v), i) > 0.0) {
        out.label[v] = static_cast<std::int32_t>(i);
        break;
      }
  }
  return out;
}

double misclassified_volume(const WeightedGraph& g, const LabelAssignment& labels, const Partition& truth) {
  if (truth.node_count() != g.node_count() || labels.label.size() != g.node_count())
    throw DomainError("labels, truth and graph must cover the same nodes");
  std::vector<std::map<std::int32_t, double>> by_cluster(truth.k());
  double wrong = 0.0;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const double d = g.degree(static_cast<NodeId>(v));
    if (labels.label[v] == LabelAssignment::kUnlabeled || truth[v] == Partition::kUnassigned) {
      wrong += d;
      continue;
    }
    by_cluster[static_cast<std::size_t>(truth[v])][labels.label[v]] += d;
  }
  for (const auto& votes : by_cluster) {
    double total = 0.0;
    double top = 0.0;
    for (const auto& [label, vol] : votes) {
      total += vol;
      top = std::max(top, vol);
    }
    wrong += total - top;
  }
  return wrong;
}

SimTranscript run_protocol(const WeightedGraph& g, const SimConfig& cfg, const std::optional<Partition>& ground_truth) {
  SimTranscript tr;
  tr.config = cfg;
  tr.expected_seeds = expected_seed_count(cfg);
  tr.rounds = resolve_rounds(g, cfg);

  const NormalizedAdjacency adj(g);
  DiffusionState st = seeding(g, cfg);
  tr.seed_nodes = st.seed_nodes;
  std::optional<VectorStats> prev;
  if (cfg.check_invariants) prev = vector_stats(adj, st.values);
  for (std::size_t t = 0; t < tr.rounds; ++t) {
    const std::size_t before = st.words_exchanged;
    st = averaging_round(g, adj, st);
    tr.words_per_round.push_back(st.words_exchanged - before);
    if (cfg.check_invariants) {
      VectorStats now = vector_stats(adj, st.values);
      record(tr.invariants, *prev, now);
      prev = std::move(now);
    }
  }
  tr.total_words = st.words_exchanged;
  tr.labels = query_labels(g, st, cfg);
  tr.unlabeled_count = tr.labels.unlabeled_count();
  if (ground_truth) {
    tr.misclassified_volume = misclassified_volume(g, tr.labels, *ground_truth);
    tr.misclassified_volume_fraction = *tr.misclassified_volume / g.volume();
  }
  return tr;
}

}  // namespace csp
