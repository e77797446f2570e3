// Bottom eigenpairs of the normalized Laplacian.
//
// Small graphs go through a dense symmetric eigensolver. Larger graphs use
// block subspace iteration with Rayleigh–Ritz extraction. Each outer step
// applies a Chebyshev polynomial in L that damps the interval
// [largest Ritz value, 2] and amplifies everything below it, which is a
// polynomial in the lazy walk P = I - L/2 as well. Degree 1 reduces to plain
// subspace iteration on P.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "csp/errors.hpp"
#include "csp/spectral.hpp"

namespace csp {

namespace {

constexpr double kSpectrumUpper = 2.0;

void orthonormalize(RowMatrix& x) {
  const Eigen::MatrixXd col_major = x;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(col_major);
  x = qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
}

std::vector<double> residual_norms(const LaplacianOperator& op, const Eigen::MatrixXd& vecs,
                                   const std::vector<double>& vals) {
  RowMatrix x = vecs;
  RowMatrix lx;
  op.apply(x, lx);
  std::vector<double> res(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    res[i] = (lx.col(c) - vals[i] * x.col(c)).norm();
  }
  return res;
}

Spectrum dense_path(const WeightedGraph& g, const LaplacianOperator& op, std::size_t j) {
  const Eigen::MatrixXd lap = dense_normalized_laplacian(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", INFINITY, 0);
  Spectrum s;
  s.dense = true;
  s.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + j);
  s.eigenvectors = solver.eigenvectors().leftCols(static_cast<Eigen::Index>(j));
  s.residuals = residual_norms(op, s.eigenvectors, s.eigenvalues);
  return s;
}

// Scaled Chebyshev filter of the given degree on the damped interval
// [cut, upper]; `low` estimates the bottom of the wanted spectrum.
void chebyshev_filter(const LaplacianOperator& op, RowMatrix& x, std::size_t degree, double low, double cut,
                      double upper) {
  const double e = (upper - cut) / 2.0;
  const double c = (upper + cut) / 2.0;
  double sigma = e / (low - c);
  const double tau = 2.0 / sigma;
  RowMatrix y;
  RowMatrix tmp;
  op.apply(x, y);
  y = (y - c * x) * (sigma / e);
  for (std::size_t i = 2; i <= degree; ++i) {
    const double sigma_next = 1.0 / (tau - sigma);
    op.apply(y, tmp);
    tmp = (tmp - c * y) * (2.0 * sigma_next / e) - (sigma * sigma_next) * x;
    x.swap(y);
    y.swap(tmp);
    sigma = sigma_next;
  }
  x.swap(y);
}

Spectrum iterative_path(const LaplacianOperator& op, std::size_t j, const EigenOptions& opts) {
  const std::size_t n = op.size();
  const std::size_t extra = opts.oversample ? opts.oversample : std::max<std::size_t>(4, j);
  const std::size_t b = std::min(n, j + extra);
  const std::size_t cap = opts.max_iterations ? opts.max_iterations : 10 * n;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  RowMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(b));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  orthonormalize(x);

  RowMatrix lx;
  double best = INFINITY;
  for (std::size_t it = 1; it <= cap; ++it) {
    op.apply(x, lx);
    Eigen::MatrixXd h = x.transpose() * lx;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(h);
    const Eigen::MatrixXd& q = rr.eigenvectors();
    x = (x * q).eval();
    lx = (lx * q).eval();
    const Eigen::VectorXd& theta = rr.eigenvalues();

    double worst = 0.0;
    std::vector<double> res(j);
    for (std::size_t i = 0; i < j; ++i) {
      const auto c = static_cast<Eigen::Index>(i);
      res[i] = (lx.col(c) - theta(c) * x.col(c)).norm();
      worst = std::max(worst, res[i]);
    }
    best = std::min(best, worst);
    if (worst <= opts.tol || b == n) {
      Spectrum s;
      s.iterations = it;
      s.eigenvalues.assign(theta.data(), theta.data() + j);
      s.eigenvectors = x.leftCols(static_cast<Eigen::Index>(j));
      s.residuals = std::move(res);
      if (b == n) s.residuals = residual_norms(op, s.eigenvectors, s.eigenvalues);
      return s;
    }

    const double cut = theta(static_cast<Eigen::Index>(b) - 1);
    const double low = std::min(theta(0), cut - 1e-3);
    if (opts.filter_degree <= 1 || cut >= kSpectrumUpper - 1e-9) {
      RowMatrix px;
      op.apply_lazy_walk(x, px);
      x.swap(px);
    } else {
      chebyshev_filter(op, x, opts.filter_degree, low, cut, kSpectrumUpper);
    }
    orthonormalize(x);
  }
  throw ConvergenceError("eigensolver did not reach tolerance " + std::to_string(opts.tol) + " within " +
                             std::to_string(cap) + " iterations (best residual " + std::to_string(best) + ")",
                         best, cap);
}

}  // namespace

Spectrum bottom_eigenpairs(const WeightedGraph& g, std::size_t j, const EigenOptions& opts) {
  const std::size_t n = g.node_count();
  if (j == 0 || j > n) throw DomainError("bottom_eigenpairs needs 1 <= j <= n");
  const LaplacianOperator op(g);
  const bool dense = opts.method == EigenMethod::dense ||
                     (opts.method == EigenMethod::automatic && n <= opts.dense_threshold);
  return dense ? dense_path(g, op, j) : iterative_path(op, j, opts);
}

}  // namespace csp
