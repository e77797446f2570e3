#include "kernels_impl.hpp"

namespace csp::simd {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void squared_distances_soa(const double* coords, std::size_t stride, std::size_t dim,
                           const double* point, std::size_t begin, std::size_t end, double* out) {
  for (std::size_t j = begin; j < end; ++j) out[j - begin] = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double* row = coords + d * stride;
    const double p = point[d];
    for (std::size_t j = begin; j < end; ++j) {
      const double diff = row[j] - p;
      out[j - begin] += diff * diff;
    }
  }
}

void csr_block_gather(CsrView csr, const double* x, double* y, std::size_t width,
                      std::size_t row_begin, std::size_t row_end) {
  for (std::size_t r = row_begin; r < row_end; ++r) {
    double* out = y + r * width;
    for (std::size_t c = 0; c < width; ++c) out[c] = 0.0;
    for (std::size_t j = csr.row_ptr[r]; j < csr.row_ptr[r + 1]; ++j) {
      const double w = csr.val[j];
      const double* in = x + static_cast<std::size_t>(csr.col[j]) * width;
      for (std::size_t c = 0; c < width; ++c) out[c] += w * in[c];
    }
  }
}

constexpr KernelTable kScalar{
    Isa::scalar, dot, axpy, axpby, squared_distance, squared_distances_soa, csr_block_gather,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace csp::simd
