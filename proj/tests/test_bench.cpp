#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "csp/bench.hpp"
#include "csp/datasets.hpp"

using namespace csp;

namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("csp_test_bench_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("small twomoons benchmark") {
  BenchSpec spec;
  spec.sizes = {200, 300};
  spec.taus = {0.8, 1.6};
  spec.seeds = 3;
  spec.master_seed = 4;
  const BenchResult r = run_benchmark(spec);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.runs.size() == 12);
  CHECK_FALSE(r.any_hard_failure());
  for (const BenchRow& row : r.rows) {
    CHECK(row.dataset == "twomoons");
    CHECK(row.edge_fraction_percent > 0.0);
    CHECK(row.edge_fraction_percent <= 100.0);
    REQUIRE(row.err1.has_value());
    CHECK(*row.err1 <= 0.05);
    CHECK(*row.err2 <= 0.05);
    CHECK(row.successful_runs + row.failed_runs == 3);
  }
  // Denser sampling keeps more edges.
  CHECK(r.rows[1].edge_fraction_percent > r.rows[0].edge_fraction_percent);
  for (const BenchRun& run : r.runs)
    if (!run.failed) CHECK(run.words_exchanged == run.edges_h);

  const BenchResult again = run_benchmark(spec);
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    CHECK(again.runs[i].edges_h == r.runs[i].edges_h);
    CHECK(again.runs[i].err2 == r.runs[i].err2);
  }

  std::ostringstream csv;
  write_bench_csv(csv, r.rows);
  CHECK(first_line(csv.str()) == "dataset,n,tau,edge_fraction_percent,err1,err2,ncut1,ncut2,words_exchanged,runtime_ms");
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("separated point masses cluster perfectly on G and H") {
  BenchSpec spec;
  spec.dataset = Dataset::gaussians;
  spec.variance = 0.0;
  spec.sigma = 0.1;
  spec.sizes = {150};
  spec.taus = {2.0, 4.0};
  spec.seeds = 2;
  const BenchResult r = run_benchmark(spec);
  for (const BenchRun& run : r.runs) CHECK_MESSAGE(!run.failed, run.error);
  for (const BenchRow& row : r.rows) {
    REQUIRE(row.successful_runs == 2);
    CHECK(*row.err1 == 0.0);
    CHECK(*row.err2 == 0.0);
  }
}

TEST_CASE("image benchmark and output files") {
  const auto dir = scratch_dir("image");
  Image img;
  img.width = 12;
  img.height = 10;
  img.rgb.resize(12 * 10 * 3);
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 12; ++c) {
      const std::uint16_t region = c < 4 ? 0 : (c < 8 ? 120 : 240);
      for (std::size_t ch = 0; ch < 3; ++ch) img.rgb[3 * (r * 12 + c) + ch] = static_cast<std::uint16_t>(ch == 0 ? region : 255 - region);
    }
  {
    std::ofstream out(dir / "img.ppm", std::ios::binary);
    write_ppm(out, img);
  }
  BenchSpec spec;
  spec.dataset = Dataset::image;
  spec.image = dir / "img.ppm";
  spec.taus = {1.0};
  spec.seeds = 2;
  const BenchResult r = run_benchmark(spec);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].n == 120);
  CHECK_FALSE(r.rows[0].err1.has_value());
  CHECK(r.rows[0].ncut1 >= 0.0);

  write_benchmark_outputs(dir, r);
  for (const char* name : {"bench.csv", "runs.csv", "plot_bench.py"}) CHECK(std::filesystem::exists(dir / name));
  std::ifstream bench(dir / "bench.csv");
  std::string header, row;
  std::getline(bench, header);
  std::getline(bench, row);
  CHECK(row.rfind("image,120,1,", 0) == 0);
  CHECK(row.find(",,") != std::string::npos);  // empty err columns

  spec.image = dir / "missing.ppm";
  CHECK_THROWS(run_benchmark(spec));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cells whose every run fails are hard failures") {
  BenchSpec spec;
  spec.sizes = {100};
  spec.taus = {1e-4};  // leaves isolated nodes, so clustering H cannot run
  spec.seeds = 2;
  const BenchResult r = run_benchmark(spec);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].hard_failed());
  CHECK(r.any_hard_failure());
  for (const BenchRun& run : r.runs) {
    CHECK(run.failed);
    CHECK_FALSE(run.error.empty());
  }
}

TEST_CASE("dataset names") {
  for (Dataset d : {Dataset::twomoons, Dataset::gaussians, Dataset::image}) CHECK(parse_dataset(dataset_name(d)) == d);
  CHECK_THROWS_AS(parse_dataset("sculpture"), std::invalid_argument);
}
