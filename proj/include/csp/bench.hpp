#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "csp/sparsifier.hpp"

namespace csp {

enum class Dataset { twomoons, gaussians, image };

Dataset parse_dataset(const std::string& name);
std::string dataset_name(Dataset d);

struct BenchSpec {
  Dataset dataset = Dataset::twomoons;
  std::vector<std::size_t> sizes{1000};
  /// Empty selects tau per run by the doubling search.
  std::vector<double> taus{0.8};
  std::size_t seeds = 5;
  std::uint64_t master_seed = 0;
  /// Kernel bandwidth; unset picks 0.1 / 1 / 20 for twomoons / gaussians / image.
  std::optional<double> sigma;
  double noise = 0.05;
  double variance = 0.04;
  std::filesystem::path image;
  /// Cluster count; 0 picks 2 / 3 / 3.
  std::size_t k = 0;
  LogBase log_base = LogBase::binary;
};

/// One (cell, seed) execution.
struct BenchRun {
  std::string dataset;
  std::size_t n = 0;
  double tau = 0.0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::size_t edges_g = 0;
  std::size_t edges_h = 0;
  double edge_fraction_percent = 0.0;
  std::optional<double> err1, err2;
  double ncut1 = 0.0;
  double ncut2 = 0.0;
  std::size_t words_exchanged = 0;
  double runtime_ms = 0.0;
  bool failed = false;
  std::string error;
};

/// Median over the successful runs of one cell.
struct BenchRow {
  std::string dataset;
  std::size_t n = 0;
  double tau = 0.0;
  double edge_fraction_percent = 0.0;
  std::optional<double> err1, err2;
  double ncut1 = 0.0;
  double ncut2 = 0.0;
  double words_exchanged = 0.0;
  double runtime_ms = 0.0;
  std::size_t successful_runs = 0;
  std::size_t failed_runs = 0;

  bool hard_failed() const noexcept { return successful_runs == 0; }
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchRun> runs;

  bool any_hard_failure() const noexcept;
};

/// For every (size, tau) cell and every seed: build G, spectral-cluster G,
/// sparsify to H, spectral-cluster H, and score both against the truth (err)
/// and in G (ncut). Cells run in parallel; every run draws from a seed derived
/// from (master seed, cell, repetition).
BenchResult run_benchmark(const BenchSpec& spec);

/// bench.csv columns: dataset,n,tau,edge_fraction_percent,err1,err2,ncut1,ncut2,words_exchanged,runtime_ms.
/// err columns are percentages and are empty when the dataset has no ground truth.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_runs_csv(std::ostream& out, const std::vector<BenchRun>& runs);
/// Python/matplotlib script that plots bench.csv from its own directory.
void write_plot_script(std::ostream& out);

/// Writes bench.csv, runs.csv and plot_bench.py into `dir`.
void write_benchmark_outputs(const std::filesystem::path& dir, const BenchResult& result);

}  // namespace csp
