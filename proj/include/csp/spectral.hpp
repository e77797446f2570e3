#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "csp/graph.hpp"

namespace csp {

/// Row-major dense block: one row per node, one column per vector. This is
/// the layout the CSR block kernels stream over.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N = D^{-1/2} A D^{-1/2} in CSR form. Rows of isolated nodes are empty.
class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(const WeightedGraph& g);

  std::size_t size() const noexcept { return inv_sqrt_degree_.size(); }
  std::span<const double> inv_sqrt_degree() const noexcept { return inv_sqrt_degree_; }
  std::span<const double> sqrt_degree() const noexcept { return sqrt_degree_; }

  /// y = N x for row-major n x width blocks (x, y must not alias).
  void multiply(const double* x, double* y, std::size_t width) const;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> val_;
  std::vector<double> inv_sqrt_degree_;
  std::vector<double> sqrt_degree_;
};

/// Matrix-free normalized Laplacian L = I - D^{-1/2} A D^{-1/2}.
class LaplacianOperator {
 public:
  /// Throws DomainError if g has an isolated node.
  explicit LaplacianOperator(const WeightedGraph& g);

  std::size_t size() const noexcept { return adjacency_.size(); }
  const NormalizedAdjacency& adjacency() const noexcept { return adjacency_; }

  std::vector<double> apply(std::span<const double> x) const;
  /// Y = L X.
  void apply(const RowMatrix& x, RowMatrix& y) const;
  /// Y = P X with P = I - L/2, the lazy diffusion operator.
  void apply_lazy_walk(const RowMatrix& x, RowMatrix& y) const;

 private:
  NormalizedAdjacency adjacency_;
};

/// Explicit n x n normalized Laplacian. Isolated nodes get a zero row/column.
Eigen::MatrixXd dense_normalized_laplacian(const WeightedGraph& g);

struct Spectrum {
  std::vector<double> eigenvalues;    ///< ascending
  Eigen::MatrixXd eigenvectors;       ///< n x j, orthonormal columns
  std::vector<double> residuals;      ///< ||L f - lambda f||
  std::size_t iterations = 0;
  bool dense = false;
};

enum class EigenMethod { automatic, dense, iterative };

struct EigenOptions {
  double tol = 1e-8;
  /// 0 selects 10 * n outer iterations.
  std::size_t max_iterations = 0;
  std::uint64_t seed = 0;
  EigenMethod method = EigenMethod::automatic;
  /// automatic uses the dense solver up to this many nodes.
  std::size_t dense_threshold = 200;
  /// Extra block columns beyond j; 0 selects max(4, j).
  std::size_t oversample = 0;
  /// Chebyshev filter degree per outer iteration; 1 is plain subspace iteration on P.
  std::size_t filter_degree = 8;
};

/// The j smallest eigenpairs of L. Throws ConvergenceError when the iterative
/// path hits its cap and DomainError on isolated nodes or j > n.
Spectrum bottom_eigenpairs(const WeightedGraph& g, std::size_t j, const EigenOptions& opts = {});

struct GapEstimate {
  std::size_t k = 0;
  double lambda_k = 0.0;
  double lambda_k_plus_1 = 0.0;
  double gap = 0.0;
  /// lambda_{k+1} / max-conductance of the reference partition, when given.
  std::optional<double> upsilon_proxy;
};

GapEstimate estimate_gap(const WeightedGraph& g, std::size_t k, const std::optional<Partition>& reference = {},
                         const EigenOptions& opts = {});

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;
  /// Re-seed attempts per empty cluster before giving up.
  std::size_t empty_cluster_retries = 10;
};

struct KMeansResult {
  std::vector<std::int32_t> assignment;
  RowMatrix centers;
  double inertia = 0.0;
  /// Objective after each Lloyd iteration of the winning restart.
  std::vector<double> inertia_history;
};

/// Lloyd's algorithm with k-means++ seeding; best of `restarts` runs.
/// Throws DomainError when k exceeds the number of distinct points.
KMeansResult kmeans(const RowMatrix& points, std::size_t k, const KMeansOptions& opts = {});

struct SpectralClusterOptions {
  EigenOptions eigen;
  KMeansOptions kmeans;
};

/// Bottom-k embedding, row normalization, k-means. Zero-norm rows are left
/// out of the fit and assigned to their nearest center afterwards.
Partition spectral_cluster(const WeightedGraph& g, std::size_t k, std::uint64_t seed,
                           const SpectralClusterOptions& opts = {});

/// Row-normalized spectral embedding (n x k) used by spectral_cluster.
RowMatrix spectral_embedding(const Spectrum& spectrum);

void write_spectrum_csv(std::ostream& out, const Spectrum& s);
void write_embedding_csv(std::ostream& out, const RowMatrix& embedding);

}  // namespace csp
