#include "csp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "csp/errors.hpp"
#include "csp/parallel.hpp"
#include "csp/rng.hpp"

namespace csp {

NormalizedAdjacency::NormalizedAdjacency(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  const auto rp = g.row_ptr();
  row_ptr_.assign(rp.begin(), rp.end());
  inv_sqrt_degree_.resize(n);
  sqrt_degree_.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    const double d = g.degree(static_cast<NodeId>(u));
    sqrt_degree_[u] = std::sqrt(d);
    inv_sqrt_degree_[u] = d > 0.0 ? 1.0 / sqrt_degree_[u] : 0.0;
  }
  col_.resize(2 * g.edge_count());
  val_.resize(2 * g.edge_count());
  for (std::size_t u = 0; u < n; ++u) {
    const auto nbrs = g.neighbors(static_cast<NodeId>(u));
    const auto ws = g.neighbor_weights(static_cast<NodeId>(u));
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      col_[row_ptr_[u] + i] = nbrs[i];
      val_[row_ptr_[u] + i] = ws[i] * inv_sqrt_degree_[u] * inv_sqrt_degree_[nbrs[i]];
    }
  }
}

void NormalizedAdjacency::multiply(const double* x, double* y, std::size_t width) const {
  const simd::CsrView csr{row_ptr_.data(), col_.data(), val_.data()};
  const auto& k = simd::kernels();
  // Rows are balanced by count, not by nonzeros; similarity graphs are near-regular.
  parallel_for(0, size(), [&](std::size_t lo, std::size_t hi) { k.csr_block_gather(csr, x, y, width, lo, hi); }, 256);
}

namespace {

NormalizedAdjacency checked_adjacency(const WeightedGraph& g) {
  if (const std::size_t iso = g.isolated_count(); iso > 0)
    throw DomainError("normalized Laplacian undefined: " + std::to_string(iso) + " isolated node(s)");
  return NormalizedAdjacency(g);
}

}  // namespace

LaplacianOperator::LaplacianOperator(const WeightedGraph& g) : adjacency_(checked_adjacency(g)) {}

std::vector<double> LaplacianOperator::apply(std::span<const double> x) const {
  if (x.size() != size()) throw DomainError("vector length does not match node count");
  std::vector<double> y(size());
  adjacency_.multiply(x.data(), y.data(), 1);
  simd::kernels().axpby(1.0, x.data(), -1.0, y.data(), size());
  return y;
}

void LaplacianOperator::apply(const RowMatrix& x, RowMatrix& y) const {
  y.resize(x.rows(), x.cols());
  adjacency_.multiply(x.data(), y.data(), static_cast<std::size_t>(x.cols()));
  simd::kernels().axpby(1.0, x.data(), -1.0, y.data(), static_cast<std::size_t>(x.size()));
}

void LaplacianOperator::apply_lazy_walk(const RowMatrix& x, RowMatrix& y) const {
  y.resize(x.rows(), x.cols());
  adjacency_.multiply(x.data(), y.data(), static_cast<std::size_t>(x.cols()));
  simd::kernels().axpby(0.5, x.data(), 0.5, y.data(), static_cast<std::size_t>(x.size()));
}

Eigen::MatrixXd dense_normalized_laplacian(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t u = 0; u < n; ++u)
    if (g.degree(static_cast<NodeId>(u)) > 0.0) lap(u, u) = 1.0;
  for (const Edge& e : g.edges()) {
    const double v = e.w / std::sqrt(g.degree(e.u) * g.degree(e.v));
    lap(e.u, e.v) -= v;
    lap(e.v, e.u) -= v;
  }
  return lap;
}

GapEstimate estimate_gap(const WeightedGraph& g, std::size_t k, const std::optional<Partition>& reference,
                         const EigenOptions& opts) {
  if (k == 0 || k + 1 > g.node_count()) throw DomainError("estimate_gap needs 1 <= k < n");
  const Spectrum s = bottom_eigenpairs(g, k + 1, opts);
  GapEstimate est;
  est.k = k;
  est.lambda_k = s.eigenvalues[k - 1];
  est.lambda_k_plus_1 = s.eigenvalues[k];
  est.gap = est.lambda_k_plus_1 - est.lambda_k;
  if (reference) {
    const double rho = partition_max_conductance(g, *reference);
    est.upsilon_proxy = rho > 0.0 ? est.lambda_k_plus_1 / rho : std::numeric_limits<double>::infinity();
  }
  return est;
}

RowMatrix spectral_embedding(const Spectrum& spectrum) {
  RowMatrix emb = spectrum.eigenvectors;
  for (Eigen::Index r = 0; r < emb.rows(); ++r) {
    const double norm = emb.row(r).norm();
    if (norm > 1e-14) emb.row(r) /= norm;
  }
  return emb;
}

Partition spectral_cluster(const WeightedGraph& g, std::size_t k, std::uint64_t seed,
                           const SpectralClusterOptions& opts) {
  if (k < 2) throw DomainError("spectral_cluster needs k >= 2");
  if (k > g.node_count()) throw DomainError("spectral_cluster needs k <= n");
  EigenOptions eig = opts.eigen;
  eig.seed = derive_seed(seed, {1});
  const Spectrum spectrum = bottom_eigenpairs(g, k, eig);

  const RowMatrix emb = spectral_embedding(spectrum);
  std::vector<Eigen::Index> fitted;
  std::vector<Eigen::Index> degenerate;
  for (Eigen::Index r = 0; r < emb.rows(); ++r) (spectrum.eigenvectors.row(r).norm() > 1e-14 ? fitted : degenerate).push_back(r);

  RowMatrix fit_points(static_cast<Eigen::Index>(fitted.size()), emb.cols());
  for (std::size_t i = 0; i < fitted.size(); ++i) fit_points.row(static_cast<Eigen::Index>(i)) = emb.row(fitted[i]);

  KMeansOptions km = opts.kmeans;
  km.seed = derive_seed(seed, {2});
  const KMeansResult result = kmeans(fit_points, k, km);

  std::vector<std::int32_t> assignment(g.node_count(), Partition::kUnassigned);
  for (std::size_t i = 0; i < fitted.size(); ++i) assignment[static_cast<std::size_t>(fitted[i])] = result.assignment[i];
  for (Eigen::Index r : degenerate) {
    Eigen::Index best = 0;
    (result.centers.rowwise() - emb.row(r)).rowwise().squaredNorm().minCoeff(&best);
    assignment[static_cast<std::size_t>(r)] = static_cast<std::int32_t>(best);
  }
  return Partition(k, std::move(assignment));
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "index,eigenvalue,residual\n";
  out.precision(17);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    out << i + 1 << ',' << s.eigenvalues[i] << ',' << s.residuals[i] << '\n';
}

void write_embedding_csv(std::ostream& out, const RowMatrix& embedding) {
  out.precision(17);
  for (Eigen::Index r = 0; r < embedding.rows(); ++r) {
    for (Eigen::Index c = 0; c < embedding.cols(); ++c) out << (c ? "," : "") << embedding(r, c);
    out << '\n';
  }
}

}  // namespace csp
