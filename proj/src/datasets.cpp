#include "csp/datasets.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "csp/errors.hpp"
#include "csp/parallel.hpp"
#include "csp/simd/kernels.hpp"

namespace csp {

PointCloud gen_twomoons(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 2) throw DomainError("twomoons needs n >= 2");
  if (!(noise >= 0.0)) throw DomainError("noise must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, 1.0);
  const std::size_t upper = (n + 1) / 2;
  PointCloud pc;
  pc.points.resize(static_cast<Eigen::Index>(n), 2);
  std::vector<std::int32_t> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = angle(rng);
    const bool first = i < upper;
    double x = first ? std::cos(t) - 0.5 : 0.5 - std::cos(t);
    double y = first ? std::sin(t) - 0.25 : 0.25 - std::sin(t);
    if (noise > 0.0) {
      x += noise * jitter(rng);
      y += noise * jitter(rng);
    }
    pc.points(static_cast<Eigen::Index>(i), 0) = x;
    pc.points(static_cast<Eigen::Index>(i), 1) = y;
    truth[i] = first ? 0 : 1;
  }
  pc.truth = Partition(2, std::move(truth));
  return pc;
}

PointCloud gen_gaussians(std::size_t n, double variance, std::uint64_t seed, const std::optional<RowMatrix>& means) {
  if (n < 3) throw DomainError("gaussians needs n >= 3");
  if (!(variance >= 0.0)) throw DomainError("variance must be non-negative");
  RowMatrix mu;
  if (means) {
    mu = *means;
  } else {
    const double h = std::sqrt(3.0);
    mu.resize(3, 2);
    mu << -1.0, -h / 3.0, 1.0, -h / 3.0, 0.0, 2.0 * h / 3.0;
  }
  if (mu.rows() < 1) throw DomainError("at least one component mean is required");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> component(0, mu.rows() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(variance);
  PointCloud pc;
  pc.points.resize(static_cast<Eigen::Index>(n), mu.cols());
  std::vector<std::int32_t> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index c = component(rng);
    for (Eigen::Index d = 0; d < mu.cols(); ++d)
      pc.points(static_cast<Eigen::Index>(i), d) = mu(c, d) + (sd > 0.0 ? sd * normal(rng) : 0.0);
    truth[i] = static_cast<std::int32_t>(c);
  }
  pc.truth = Partition(static_cast<std::size_t>(mu.rows()), std::move(truth));
  return pc;
}

WeightedGraph build_similarity_graph(const PointCloud& pc, const SimilarityConfig& cfg) {
  if (!(cfg.sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(cfg.weight_floor >= 0.0)) throw DomainError("weight floor must be non-negative");
  const std::size_t n = pc.size();
  if (n < 2) throw DomainError("similarity graph needs at least two points");
  const std::size_t dim = pc.dim();
  for (Eigen::Index i = 0; i < pc.points.size(); ++i)
    if (!std::isfinite(pc.points.data()[i])) throw DomainError("point coordinates must be finite");

  // Dimension-major copy so the distance kernel streams contiguous coordinates.
  std::vector<double> soa(dim * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dim; ++d) soa[d * n + i] = pc.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));

  const double scale = -1.0 / (2.0 * cfg.sigma * cfg.sigma);
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + (n - 1 - i);
  std::vector<double> weight(offset[n]);
  const auto& kern = simd::kernels();
  parallel_for(0, n, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> point(dim);
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t d = 0; d < dim; ++d) point[d] = soa[d * n + i];
      double* row = weight.data() + offset[i];
      kern.squared_distances_soa(soa.data(), n, dim, point.data(), i + 1, n, row);
      for (std::size_t j = 0; j < n - 1 - i; ++j) row[j] = std::exp(row[j] * scale);
    }
  }, 64);

  std::vector<Edge> edges;
  edges.reserve(weight.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = weight[offset[i] + (j - i - 1)];
      if (w > 0.0 && w >= cfg.weight_floor) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), w});
    }
  return WeightedGraph::from_edges(n, std::move(edges));
}

PointCloud image_to_points(const Image& img) {
  PointCloud pc;
  pc.points.resize(static_cast<Eigen::Index>(img.width * img.height), 5);
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) {
      const std::size_t p = r * img.width + c;
      const auto row = static_cast<Eigen::Index>(p);
      pc.points(row, 0) = static_cast<double>(c);
      pc.points(row, 1) = static_cast<double>(r);
      for (std::size_t ch = 0; ch < 3; ++ch) pc.points(row, static_cast<Eigen::Index>(2 + ch)) = img.rgb[3 * p + ch];
    }
  return pc;
}

void write_points_csv(std::ostream& out, const PointCloud& pc) {
  out.precision(17);
  for (Eigen::Index r = 0; r < pc.points.rows(); ++r) {
    for (Eigen::Index c = 0; c < pc.points.cols(); ++c) out << (c ? "," : "") << pc.points(r, c);
    out << '\n';
  }
}

PointCloud read_points_csv(std::istream& in) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t fields = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      std::string_view field(line.data() + pos, (comma == std::string::npos ? line.size() : comma) - pos);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v))
        throw ParseError(line_no, "expected a finite number");
      coords.push_back(v);
      ++fields;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (rows == 0) dim = fields;
    if (fields != dim) throw ParseError(line_no, "expected " + std::to_string(dim) + " coordinates");
    ++rows;
  }
  PointCloud pc;
  pc.points = Eigen::Map<RowMatrix>(coords.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  return pc;
}

}  // namespace csp
