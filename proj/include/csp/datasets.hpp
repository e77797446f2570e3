#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "csp/graph.hpp"
#include "csp/spectral.hpp"

namespace csp {

struct PointCloud {
  RowMatrix points;  ///< one row per point
  std::optional<Partition> truth;

  std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points.cols()); }
};

/// Two interleaved unit half-circles. The upper moon is centred at
/// (-0.5, -0.25), the lower (flipped) moon at (0.5, 0.25); angles are uniform
/// on [0, pi] and each coordinate gets N(0, noise^2) jitter. The first
/// ceil(n/2) points form moon 0.
PointCloud gen_twomoons(std::size_t n, double noise, std::uint64_t seed);

/// Uniform mixture of isotropic Gaussians with per-axis variance `variance`.
/// Default means: an equilateral triangle of side 2 centred at the origin.
PointCloud gen_gaussians(std::size_t n, double variance, std::uint64_t seed,
                         const std::optional<RowMatrix>& means = std::nullopt);

struct SimilarityConfig {
  double sigma = 1.0;
  /// Pairs with weight below this are dropped; 0 keeps every pair.
  double weight_floor = 0.0;
};

/// Complete graph with w(u,v) = exp(-||u-v||^2 / (2 sigma^2)) (minus pairs
/// under the floor).
WeightedGraph build_similarity_graph(const PointCloud& pc, const SimilarityConfig& cfg);

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  /// Row-major RGB triples.
  std::vector<std::uint16_t> rgb;
};

/// Netpbm ingestion: P3/P6 colour, plus P2/P5 grayscale mapped to r = g = b.
Image read_ppm(std::istream& in);
Image read_ppm_file(const std::filesystem::path& path);
/// Binary P6 output.
void write_ppm(std::ostream& out, const Image& img);

/// One point per pixel: (column, row, R, G, B), row-major pixel order.
PointCloud image_to_points(const Image& img);

void write_points_csv(std::ostream& out, const PointCloud& pc);
PointCloud read_points_csv(std::istream& in);

}  // namespace csp
