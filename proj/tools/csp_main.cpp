// csp: command-line front end for sparsification, distributed clustering
// simulation, spectral clustering, dataset generation and benchmarking.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csp/bench.hpp"
#include "csp/datasets.hpp"
#include "csp/distsim.hpp"
#include "csp/errors.hpp"
#include "csp/graph.hpp"
#include "csp/metrics.hpp"
#include "csp/parallel.hpp"
#include "csp/simd/kernels.hpp"
#include "csp/sparsifier.hpp"
#include "csp/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string output_dir;
  std::string simd;
};

fs::path out_path(const Globals& g, const std::string& p) {
  if (p.empty() || g.output_dir.empty() || fs::path(p).is_absolute()) return p;
  return fs::path(g.output_dir) / p;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << '\n'; }

csp::LogBase parse_log_base(const std::string& s) {
  if (s == "2") return csp::LogBase::binary;
  if (s == "e") return csp::LogBase::natural;
  throw CLI::ValidationError("--log-base", "expected 2 or e");
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string dataset = "twomoons";
  std::size_t n = 1000;
  double noise = 0.05;
  double variance = 0.04;
  std::string image;
  std::string points = "points.csv";
  std::string truth;
  std::string graph;
  std::optional<double> sigma;
};

int run_gen(const Globals& g, const GenArgs& a) {
  csp::PointCloud pc;
  const csp::Dataset d = csp::parse_dataset(a.dataset);
  switch (d) {
    case csp::Dataset::twomoons: pc = csp::gen_twomoons(a.n, a.noise, g.seed); break;
    case csp::Dataset::gaussians: pc = csp::gen_gaussians(a.n, a.variance, g.seed); break;
    case csp::Dataset::image:
      if (a.image.empty()) throw CLI::ValidationError("--image", "required for --dataset image");
      pc = csp::image_to_points(csp::read_ppm_file(a.image));
      break;
  }
  {
    auto out = open_out(out_path(g, a.points));
    csp::write_points_csv(out, pc);
  }
  if (!a.truth.empty() && pc.truth) {
    auto out = open_out(out_path(g, a.truth));
    csp::write_partition(out, *pc.truth, "node,part");
  }
  if (!a.graph.empty()) {
    const double sigma = a.sigma.value_or(d == csp::Dataset::twomoons ? 0.1 : d == csp::Dataset::gaussians ? 1.0 : 20.0);
    auto out = open_out(out_path(g, a.graph));
    csp::write_edge_list(out, csp::build_similarity_graph(pc, {sigma, 0.0}));
  }
  std::cout << "generated " << pc.size() << " points of dimension " << pc.dim() << '\n';
  return 0;
}

// ---------------------------------------------------------------- sparsify

struct SparsifyArgs {
  std::string input;
  std::string tau = "1.6";
  std::size_t k = 2;
  std::string output = "h.edges";
  std::string stats;
  std::string log_base = "2";
};

int run_sparsify(const Globals& g, const SparsifyArgs& a) {
  const csp::WeightedGraph graph = csp::read_edge_list_file(a.input);
  const auto start = std::chrono::steady_clock::now();
  csp::SparsifierOutput out;
  double tau = 0.0;
  json trace = json::array();
  if (a.tau == "auto") {
    csp::TauSearchOptions opts;
    opts.log_base = parse_log_base(a.log_base);
    csp::TauSearchResult r = csp::tau_doubling_search(graph, a.k, g.seed, opts);
    tau = r.tau;
    out = std::move(r.sparsifier);
    for (const auto& s : r.trace) trace.push_back({{"tau", s.tau}, {"valid", s.valid}, {"gap", s.gap}, {"kept_edges", s.kept_edges}});
  } else {
    tau = std::stod(a.tau);
    out = csp::sparsify(graph, {tau, g.seed, parse_log_base(a.log_base), false});
  }
  const double runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  {
    auto os = open_out(out_path(g, a.output));
    csp::write_edge_list(os, out.h);
  }
  json stats = {{"n", graph.node_count()},
                {"m", graph.edge_count()},
                {"tau", tau},
                {"log_base", a.log_base},
                {"seed", g.seed},
                {"kept_edges", out.kept_edges},
                {"sum_p_e", out.expected_edges},
                {"words_exchanged", out.words_exchanged},
                {"edge_fraction_percent", graph.edge_count() ? 100.0 * static_cast<double>(out.kept_edges) / static_cast<double>(graph.edge_count()) : 0.0},
                {"runtime_ms", runtime_ms}};
  if (!trace.empty()) stats["tau_search"] = trace;
  if (!a.stats.empty()) write_json(out_path(g, a.stats), stats);
  std::cout << stats.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string input;
  double beta = 0.5;
  std::string rounds = "auto";
  std::optional<std::size_t> k_hint;
  double round_multiplier = 1.0;
  double seed_multiplier = 8.0;
  std::string truth;
  std::string out = "labels.csv";
  std::string transcript;
};

int run_cluster(const Globals& g, const ClusterArgs& a) {
  const csp::WeightedGraph graph = csp::read_edge_list_file(a.input);
  csp::SimConfig cfg;
  cfg.beta = a.beta;
  cfg.seed = g.seed;
  cfg.k_hint = a.k_hint;
  cfg.round_multiplier = a.round_multiplier;
  cfg.seed_multiplier = a.seed_multiplier;
  if (a.rounds != "auto") cfg.rounds = static_cast<std::size_t>(std::stoull(a.rounds));
  std::optional<csp::Partition> truth;
  if (!a.truth.empty()) truth = csp::read_partition_file(a.truth, graph.node_count());

  const csp::SimTranscript tr = csp::run_protocol(graph, cfg, truth);
  {
    auto os = open_out(out_path(g, a.out));
    os << "node,label\n";
    for (std::size_t v = 0; v < tr.labels.label.size(); ++v) os << v << ',' << tr.labels.label[v] << '\n';
  }
  json j = {{"n", graph.node_count()},
            {"m", graph.edge_count()},
            {"beta", cfg.beta},
            {"seed", cfg.seed},
            {"rounds", tr.rounds},
            {"expected_seeds", tr.expected_seeds},
            {"s", tr.seed_count()},
            {"seed_nodes", tr.seed_nodes},
            {"words_per_round", tr.words_per_round},
            {"total_words", tr.total_words},
            {"unlabeled_count", tr.unlabeled_count},
            {"invariant_violations", tr.invariants.total()},
            {"max_conservation_drift", tr.invariants.max_conservation_drift}};
  if (tr.misclassified_volume) {
    j["misclassified_volume"] = *tr.misclassified_volume;
    j["misclassified_volume_fraction"] = *tr.misclassified_volume_fraction;
  }
  if (!a.transcript.empty()) write_json(out_path(g, a.transcript), j);
  json summary = j;
  summary.erase("seed_nodes");
  summary.erase("words_per_round");
  std::cout << summary.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------- spectral

struct SpectralArgs {
  std::string input;
  std::size_t count = 5;
  std::size_t k = 0;
  double tol = 1e-8;
  std::string method = "auto";
  std::string spectrum = "spectrum.csv";
  std::string embedding;
  std::string labels;
};

int run_spectral(const Globals& g, const SpectralArgs& a) {
  const csp::WeightedGraph graph = csp::read_edge_list_file(a.input);
  csp::EigenOptions opts;
  opts.tol = a.tol;
  opts.seed = g.seed;
  if (a.method == "dense") opts.method = csp::EigenMethod::dense;
  else if (a.method == "iterative") opts.method = csp::EigenMethod::iterative;
  else if (a.method != "auto") throw CLI::ValidationError("--method", "expected auto, dense or iterative");

  const std::size_t j = std::max(a.count, a.k);
  const csp::Spectrum s = csp::bottom_eigenpairs(graph, j, opts);
  {
    auto os = open_out(out_path(g, a.spectrum));
    csp::write_spectrum_csv(os, s);
  }
  if (!a.embedding.empty()) {
    csp::Spectrum head = s;
    const std::size_t cols = a.k ? a.k : j;
    head.eigenvectors = s.eigenvectors.leftCols(static_cast<Eigen::Index>(cols));
    auto os = open_out(out_path(g, a.embedding));
    csp::write_embedding_csv(os, csp::spectral_embedding(head));
  }
  if (!a.labels.empty()) {
    if (a.k < 2) throw CLI::ValidationError("--k", "spectral clustering needs --k >= 2");
    csp::SpectralClusterOptions co;
    co.eigen = opts;
    const csp::Partition p = csp::spectral_cluster(graph, a.k, g.seed, co);
    auto os = open_out(out_path(g, a.labels));
    csp::write_partition(os, p, "node,part");
  }
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    std::cout << "lambda_" << i + 1 << " = " << s.eigenvalues[i] << " (residual " << s.residuals[i] << ")\n";
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string dataset = "twomoons";
  std::vector<std::size_t> sizes{1000};
  std::vector<std::string> taus{"0.8"};
  std::size_t seeds = 5;
  std::optional<double> sigma;
  std::string image;
  std::size_t k = 0;
  std::string log_base = "2";
};

int run_bench(const Globals& g, const BenchArgs& a) {
  csp::BenchSpec spec;
  spec.dataset = csp::parse_dataset(a.dataset);
  spec.sizes = a.sizes;
  spec.taus.clear();
  for (const std::string& t : a.taus)
    if (t != "auto") spec.taus.push_back(std::stod(t));
  spec.seeds = a.seeds;
  spec.master_seed = g.seed;
  spec.sigma = a.sigma;
  spec.image = a.image;
  spec.k = a.k;
  spec.log_base = parse_log_base(a.log_base);
  const csp::BenchResult result = csp::run_benchmark(spec);
  const fs::path dir = g.output_dir.empty() ? fs::path(".") : fs::path(g.output_dir);
  csp::write_benchmark_outputs(dir, result);
  csp::write_bench_csv(std::cout, result.rows);
  for (const auto& run : result.runs)
    if (run.failed) std::cerr << "run n=" << run.n << " rep=" << run.repetition << " failed: " << run.error << '\n';
  return result.any_hard_failure() ? 1 : 0;
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
  std::string input;
  std::string labels;
  std::string truth;
  std::size_t n = 0;
};

int run_metrics(const Globals&, const MetricsArgs& a) {
  std::optional<csp::WeightedGraph> graph;
  if (!a.input.empty()) graph = csp::read_edge_list_file(a.input);
  const std::size_t n = graph ? graph->node_count() : a.n;
  if (n == 0) throw CLI::ValidationError("--n", "give --input or --n");
  const csp::Partition labels = csp::read_partition_file(a.labels, n);
  json j = {{"n", n}, {"k", labels.k()}};
  if (!a.truth.empty()) {
    const csp::Partition truth = csp::read_partition_file(a.truth, n);
    const csp::ErrReport rep = graph ? csp::misclassification_ratio(labels, truth, *graph)
                                     : csp::misclassification_ratio(labels, truth);
    j["err"] = rep.err;
    j["matching"] = rep.matching;
    if (graph) {
      j["misclassified_volume"] = rep.misclassified_volume;
      j["misclassified_volume_fraction"] = rep.volume_fraction;
    }
  }
  if (graph && labels.fully_assigned()) {
    j["ncut"] = csp::ncut(*graph, labels);
    j["max_conductance"] = csp::partition_max_conductance(*graph, labels);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-preserving sparsification and distributed clustering toolkit"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed, "Master RNG seed")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--output-dir", globals.output_dir, "Directory for relative output paths");
  app.add_option("--simd", globals.simd, "Kernel ISA override: scalar, avx2 or neon");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset or ingest an image");
  gen_cmd->add_option("--dataset", gen.dataset, "twomoons | gaussians | image")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Number of points")->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Twomoons positional noise std")->capture_default_str();
  gen_cmd->add_option("--variance", gen.variance, "Gaussians per-axis variance")->capture_default_str();
  gen_cmd->add_option("--image", gen.image, "PPM input for --dataset image");
  gen_cmd->add_option("--points", gen.points, "Points CSV output")->capture_default_str();
  gen_cmd->add_option("--truth", gen.truth, "Ground-truth labels output");
  gen_cmd->add_option("--graph", gen.graph, "Also write the similarity graph as an edge list");
  gen_cmd->add_option("--sigma", gen.sigma, "Kernel bandwidth for --graph");

  SparsifyArgs sp;
  auto* sp_cmd = app.add_subcommand("sparsify", "Cluster-preserving edge sampling");
  sp_cmd->add_option("--input", sp.input, "Input edge list")->required();
  sp_cmd->add_option("--tau", sp.tau, "Sampling parameter, or 'auto' for the doubling search")->capture_default_str();
  sp_cmd->add_option("--k", sp.k, "Cluster count used by --tau auto")->capture_default_str();
  sp_cmd->add_option("--output", sp.output, "Sparsified edge list")->capture_default_str();
  sp_cmd->add_option("--stats", sp.stats, "Statistics JSON");
  sp_cmd->add_option("--log-base", sp.log_base, "Base of log n: 2 or e")->capture_default_str();

  ClusterArgs cl;
  auto* cl_cmd = app.add_subcommand("cluster", "Simulate the distributed seeding/averaging/query protocol");
  cl_cmd->add_option("--input", cl.input, "Input edge list")->required();
  cl_cmd->add_option("--beta", cl.beta, "Cluster balance lower bound")->capture_default_str();
  cl_cmd->add_option("--rounds", cl.rounds, "auto or a round count")->capture_default_str();
  cl_cmd->add_option("--k-hint", cl.k_hint, "Cluster count for the spectral choice of T");
  cl_cmd->add_option("--round-multiplier", cl.round_multiplier, "Constant in T = c log n / lambda_{k+1}")->capture_default_str();
  cl_cmd->add_option("--seed-multiplier", cl.seed_multiplier, "Constant in s = a/beta log(1/beta)")->capture_default_str();
  cl_cmd->add_option("--truth", cl.truth, "Ground-truth labels for misclassified volume");
  cl_cmd->add_option("--out", cl.out, "Labels CSV (node,label; -1 = unlabeled)")->capture_default_str();
  cl_cmd->add_option("--transcript", cl.transcript, "Transcript JSON");

  SpectralArgs spec;
  auto* spec_cmd = app.add_subcommand("spectral", "Bottom eigenpairs and spectral clustering");
  spec_cmd->add_option("--input", spec.input, "Input edge list")->required();
  spec_cmd->add_option("--count", spec.count, "Number of eigenpairs")->capture_default_str();
  spec_cmd->add_option("--k", spec.k, "Cluster count for --embedding / --labels");
  spec_cmd->add_option("--tol", spec.tol, "Residual tolerance")->capture_default_str();
  spec_cmd->add_option("--method", spec.method, "auto | dense | iterative")->capture_default_str();
  spec_cmd->add_option("--spectrum", spec.spectrum, "Spectrum CSV")->capture_default_str();
  spec_cmd->add_option("--embedding", spec.embedding, "Row-normalized embedding CSV");
  spec_cmd->add_option("--labels", spec.labels, "Spectral clustering labels");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Spectral clustering on G versus the sparsifier H");
  bench_cmd->add_option("--dataset", bench.dataset, "twomoons | gaussians | image")->capture_default_str();
  bench_cmd->add_option("--n", bench.sizes, "Dataset sizes")->delimiter(',');
  bench_cmd->add_option("--tau", bench.taus, "tau values or 'auto'")->delimiter(',');
  bench_cmd->add_option("--seeds", bench.seeds, "Repetitions per cell")->capture_default_str();
  bench_cmd->add_option("--sigma", bench.sigma, "Kernel bandwidth override");
  bench_cmd->add_option("--image", bench.image, "PPM input for --dataset image");
  bench_cmd->add_option("--k", bench.k, "Cluster count override");
  bench_cmd->add_option("--log-base", bench.log_base, "Base of log n: 2 or e")->capture_default_str();

  MetricsArgs met;
  auto* met_cmd = app.add_subcommand("metrics", "err / ncut / conductance of a labelling");
  met_cmd->add_option("--input", met.input, "Edge list (enables ncut and volume metrics)");
  met_cmd->add_option("--labels", met.labels, "Labels CSV")->required();
  met_cmd->add_option("--truth", met.truth, "Ground-truth labels");
  met_cmd->add_option("--n", met.n, "Node count when no --input is given");

  CLI11_PARSE(app, argc, argv);

  try {
    csp::set_thread_count(globals.threads);
    if (!globals.simd.empty()) {
      bool found = false;
      for (auto isa : {csp::simd::Isa::scalar, csp::simd::Isa::avx2, csp::simd::Isa::neon})
        if (globals.simd == csp::simd::isa_name(isa)) {
          csp::simd::select_isa(isa);
          found = true;
        }
      if (!found) throw CLI::ValidationError("--simd", "expected scalar, avx2 or neon");
    }
    if (*gen_cmd) return run_gen(globals, gen);
    if (*sp_cmd) return run_sparsify(globals, sp);
    if (*cl_cmd) return run_cluster(globals, cl);
    if (*spec_cmd) return run_spectral(globals, spec);
    if (*bench_cmd) return run_bench(globals, bench);
    if (*met_cmd) return run_metrics(globals, met);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
