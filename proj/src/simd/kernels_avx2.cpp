// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace csp::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  const __m256d b = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d by = _mm256_mul_pd(b, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), by));
  }
  for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void squared_distances_soa(const double* coords, std::size_t stride, std::size_t dim,
                           const double* point, std::size_t begin, std::size_t end, double* out) {
  std::size_t j = begin;
  for (; j + 4 <= end; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dim; ++d) {
      const __m256d diff =
          _mm256_sub_pd(_mm256_loadu_pd(coords + d * stride + j), _mm256_set1_pd(point[d]));
      acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    _mm256_storeu_pd(out + (j - begin), acc);
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
  if (width == 1) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
      std::size_t j = csr.row_ptr[r];
      const std::size_t stop = csr.row_ptr[r + 1];
      __m256d acc = _mm256_setzero_pd();
      for (; j + 4 <= stop; j += 4) {
        const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(csr.col + j));
        const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(csr.val + j), xv, acc);
      }
      double s = hsum(acc);
      for (; j < stop; ++j) s += csr.val[j] * x[csr.col[j]];
      y[r] = s;
    }
    return;
  }
  for (std::size_t r = row_begin; r < row_end; ++r) {
    double* out = y + r * width;
    for (std::size_t c = 0; c < width; ++c) out[c] = 0.0;
    for (std::size_t j = csr.row_ptr[r]; j < csr.row_ptr[r + 1]; ++j) {
      const double w = csr.val[j];
      const double* in = x + static_cast<std::size_t>(csr.col[j]) * width;
      const __m256d wv = _mm256_set1_pd(w);
      std::size_t c = 0;
      for (; c + 4 <= width; c += 4)
        _mm256_storeu_pd(out + c, _mm256_fmadd_pd(wv, _mm256_loadu_pd(in + c), _mm256_loadu_pd(out + c)));
      for (; c < width; ++c) out[c] += w * in[c];
    }
  }
}

constexpr KernelTable kAvx2{
    Isa::avx2, dot, axpy, axpby, squared_distance, squared_distances_soa, csr_block_gather,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace csp::simd
