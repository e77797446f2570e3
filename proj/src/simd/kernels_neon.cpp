// aarch64 only; NEON is part of the base ISA there.
#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace csp::simd {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  const float64x2_t b = vdupq_n_f64(beta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vmulq_f64(b, vld1q_f64(y + i)), a, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void squared_distances_soa(const double* coords, std::size_t stride, std::size_t dim,
                           const double* point, std::size_t begin, std::size_t end, double* out) {
  std::size_t j = begin;
  for (; j + 2 <= end; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t d = 0; d < dim; ++d) {
      const float64x2_t diff = vsubq_f64(vld1q_f64(coords + d * stride + j), vdupq_n_f64(point[d]));
      acc = vfmaq_f64(acc, diff, diff);
    }
    vst1q_f64(out + (j - begin), acc);
  }
  for (; j < end; ++j) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = coords[d * stride + j] - point[d];
      s += diff * diff;
    }
    out[j - begin] = s;
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
      const float64x2_t wv = vdupq_n_f64(w);
      std::size_t c = 0;
      for (; c + 2 <= width; c += 2) vst1q_f64(out + c, vfmaq_f64(vld1q_f64(out + c), wv, vld1q_f64(in + c)));
      for (; c < width; ++c) out[c] += w * in[c];
    }
  }
}

constexpr KernelTable kNeon{
    Isa::neon, dot, axpy, axpby, squared_distance, squared_distances_soa, csr_block_gather,
};

}  // namespace

namespace detail {
const KernelTable& neon_table() noexcept { return kNeon; }
}  // namespace detail

}  // namespace csp::simd
