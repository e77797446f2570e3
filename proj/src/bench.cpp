#include "csp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "csp/datasets.hpp"
#include "csp/metrics.hpp"
#include "csp/parallel.hpp"
#include "csp/rng.hpp"
#include "csp/spectral.hpp"

namespace csp {

Dataset parse_dataset(const std::string& name) {
  if (name == "twomoons") return Dataset::twomoons;
  if (name == "gaussians") return Dataset::gaussians;
  if (name == "image") return Dataset::image;
  throw std::invalid_argument("unknown dataset '" + name + "' (expected twomoons, gaussians or image)");
}

std::string dataset_name(Dataset d) {
  switch (d) {
    case Dataset::twomoons: return "twomoons";
    case Dataset::gaussians: return "gaussians";
    case Dataset::image: return "image";
  }
  return "unknown";
}

bool BenchResult::any_hard_failure() const noexcept {
  return std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.hard_failed(); });
}

namespace {

double default_sigma(Dataset d) {
  switch (d) {
    case Dataset::twomoons: return 0.1;
    case Dataset::gaussians: return 1.0;
    case Dataset::image: return 20.0;
  }
  return 1.0;
}

std::size_t default_k(Dataset d) { return d == Dataset::twomoons ? 2 : 3; }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

struct Cell {
  std::size_t n;
  std::optional<double> tau;
};

void execute(const BenchSpec& spec, const Cell& cell, const PointCloud* image_points, BenchRun& run) {
  const auto start = std::chrono::steady_clock::now();
  PointCloud pc;
  switch (spec.dataset) {
    case Dataset::twomoons: pc = gen_twomoons(cell.n, spec.noise, derive_seed(run.seed, {0})); break;
    case Dataset::gaussians: pc = gen_gaussians(cell.n, spec.variance, derive_seed(run.seed, {0})); break;
    case Dataset::image: pc = *image_points; break;
  }
  const std::size_t k = spec.k ? spec.k : default_k(spec.dataset);
  const WeightedGraph g = build_similarity_graph(pc, {spec.sigma.value_or(default_sigma(spec.dataset)), 0.0});
  run.n = g.node_count();
  run.edges_g = g.edge_count();

  const Partition p1 = spectral_cluster(g, k, derive_seed(run.seed, {1}));

  SparsifierOutput sp;
  if (cell.tau) {
    run.tau = *cell.tau;
    sp = sparsify(g, {*cell.tau, derive_seed(run.seed, {2}), spec.log_base, false});
  } else {
    TauSearchOptions opts;
    opts.log_base = spec.log_base;
    TauSearchResult found = tau_doubling_search(g, k, derive_seed(run.seed, {2}), opts);
    run.tau = found.tau;
    sp = std::move(found.sparsifier);
  }
  run.edges_h = sp.kept_edges;
  run.words_exchanged = sp.words_exchanged;
  run.edge_fraction_percent = 100.0 * static_cast<double>(sp.kept_edges) / static_cast<double>(g.edge_count());

  const Partition p2 = spectral_cluster(sp.h, k, derive_seed(run.seed, {3}));
  run.ncut1 = ncut(g, p1);
  run.ncut2 = ncut(g, p2);
  if (pc.truth) {
    run.err1 = misclassification_ratio(p1, *pc.truth).err;
    run.err2 = misclassification_ratio(p2, *pc.truth).err;
  }
  run.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

BenchResult run_benchmark(const BenchSpec& spec) {
  if (spec.seeds == 0) throw std::invalid_argument("benchmark needs at least one seed");
  std::optional<PointCloud> image_points;
  std::vector<std::size_t> sizes = spec.sizes;
  if (spec.dataset == Dataset::image) {
    image_points = image_to_points(read_ppm_file(spec.image));
    sizes = {image_points->size()};
  }
  std::vector<Cell> cells;
  for (std::size_t n : sizes) {
    if (spec.taus.empty()) cells.push_back({n, std::nullopt});
    for (double tau : spec.taus) cells.push_back({n, tau});
  }

  BenchResult result;
  result.runs.resize(cells.size() * spec.seeds);
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t r = 0; r < spec.seeds; ++r) {
      BenchRun& run = result.runs[c * spec.seeds + r];
      run.dataset = dataset_name(spec.dataset);
      run.n = cells[c].n;
      run.tau = cells[c].tau.value_or(0.0);
      run.repetition = r;
      run.seed = derive_seed(spec.master_seed, {c, r});
    }

  parallel_for(0, result.runs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      BenchRun& run = result.runs[i];
      try {
        execute(spec, cells[i / spec.seeds], image_points ? &*image_points : nullptr, run);
      } catch (const std::exception& e) {
        run.failed = true;
        run.error = e.what();
      }
    }
  }, 1);

  for (std::size_t c = 0; c < cells.size(); ++c) {
    BenchRow row;
    row.dataset = dataset_name(spec.dataset);
    row.n = cells[c].n;
    row.tau = cells[c].tau.value_or(0.0);
    std::vector<double> frac, e1, e2, n1, n2, words, ms, taus;
    for (std::size_t r = 0; r < spec.seeds; ++r) {
      const BenchRun& run = result.runs[c * spec.seeds + r];
      if (run.failed) {
        ++row.failed_runs;
        continue;
      }
      ++row.successful_runs;
      row.n = run.n;
      frac.push_back(run.edge_fraction_percent);
      if (run.err1) e1.push_back(*run.err1);
      if (run.err2) e2.push_back(*run.err2);
      n1.push_back(run.ncut1);
      n2.push_back(run.ncut2);
      words.push_back(static_cast<double>(run.words_exchanged));
      ms.push_back(run.runtime_ms);
      taus.push_back(run.tau);
    }
    row.edge_fraction_percent = median(frac);
    if (!e1.empty()) row.err1 = median(e1);
    if (!e2.empty()) row.err2 = median(e2);
    row.ncut1 = median(n1);
    row.ncut2 = median(n2);
    row.words_exchanged = median(words);
    row.runtime_ms = median(ms);
    if (!cells[c].tau) row.tau = median(taus);
    result.rows.push_back(row);
  }
  return result;
}

namespace {

void put_optional_percent(std::ostream& out, const std::optional<double>& v) {
  if (v) out << 100.0 * *v;
}

}  // namespace

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "dataset,n,tau,edge_fraction_percent,err1,err2,ncut1,ncut2,words_exchanged,runtime_ms\n";
  out.precision(10);
  for (const BenchRow& r : rows) {
    out << r.dataset << ',' << r.n << ',' << r.tau << ',' << r.edge_fraction_percent << ',';
    put_optional_percent(out, r.err1);
    out << ',';
    put_optional_percent(out, r.err2);
    out << ',' << r.ncut1 << ',' << r.ncut2 << ',' << r.words_exchanged << ',' << r.runtime_ms << '\n';
  }
}

void write_runs_csv(std::ostream& out, const std::vector<BenchRun>& runs) {
  out << "dataset,n,tau,repetition,seed,edges_g,edges_h,edge_fraction_percent,err1,err2,ncut1,ncut2,"
         "words_exchanged,runtime_ms,status\n";
  out.precision(10);
  for (const BenchRun& r : runs) {
    out << r.dataset << ',' << r.n << ',' << r.tau << ',' << r.repetition << ',' << r.seed << ',' << r.edges_g << ','
        << r.edges_h << ',' << r.edge_fraction_percent << ',';
    put_optional_percent(out, r.err1);
    out << ',';
    put_optional_percent(out, r.err2);
    out << ',' << r.ncut1 << ',' << r.ncut2 << ',' << r.words_exchanged << ',' << r.runtime_ms << ',';
    if (r.failed) {
      std::string msg = r.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out << "failed: " << msg;
    } else {
      out << "ok";
    }
    out << '\n';
  }
}

void write_plot_script(std::ostream& out) {
  out << R"PY(#!/usr/bin/env python3
"""Plot bench.csv (written next to this script)."""
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "bench.csv")) as f:
    rows = list(csv.DictReader(f))

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for dataset in sorted({r["dataset"] for r in rows}):
    sub = sorted((r for r in rows if r["dataset"] == dataset), key=lambda r: int(r["n"]))
    ns = [int(r["n"]) for r in sub]
    axes[0].plot(ns, [float(r["edge_fraction_percent"]) for r in sub], marker="o", label=dataset)
    if all(r["err1"] for r in sub):
        axes[1].plot(ns, [float(r["err1"]) for r in sub], marker="o", label=dataset + " err1 (G)")
        axes[1].plot(ns, [float(r["err2"]) for r in sub], marker="s", linestyle="--", label=dataset + " err2 (H)")
    else:
        axes[1].plot(ns, [float(r["ncut1"]) for r in sub], marker="o", label=dataset + " ncut1 (G)")
        axes[1].plot(ns, [float(r["ncut2"]) for r in sub], marker="s", linestyle="--", label=dataset + " ncut2 (H)")
axes[0].set_xlabel("n")
axes[0].set_ylabel("edges kept (%)")
axes[1].set_xlabel("n")
axes[1].set_ylabel("err (%) / ncut")
for ax in axes:
    ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "bench.png"), dpi=150)
)PY";
}

void write_benchmark_outputs(const std::filesystem::path& dir, const BenchResult& result) {
  std::filesystem::create_directories(dir);
  std::ofstream bench(dir / "bench.csv");
  write_bench_csv(bench, result.rows);
  std::ofstream runs(dir / "runs.csv");
  write_runs_csv(runs, result.runs);
  std::ofstream plot(dir / "plot_bench.py");
  write_plot_script(plot);
  if (!bench || !runs || !plot) throw std::runtime_error("failed writing benchmark outputs to " + dir.string());
}

}  // namespace csp
