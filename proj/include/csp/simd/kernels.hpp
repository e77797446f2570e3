#pragma once

// Runtime-dispatched arithmetic kernels.
//
// Every kernel has a scalar reference implementation. Vector variants (AVX2+FMA
// on x86-64, NEON on aarch64) are compiled into separate translation units and
// selected at startup from CPU features. They may differ from the reference
// only by floating-point reassociation.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace csp::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Compressed sparse rows: row r owns entries [row_ptr[r], row_ptr[r+1]).
struct CsrView {
  const std::size_t* row_ptr;
  const std::uint32_t* col;
  const double* val;
};

struct KernelTable {
  Isa isa;

  double (*dot)(const double* a, const double* b, std::size_t n);

  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  /// y = alpha * x + beta * y
  void (*axpby)(double alpha, const double* x, double beta, double* y, std::size_t n);

  double (*squared_distance)(const double* a, const double* b, std::size_t n);

  /// out[j - begin] = sum_d (coords[d * stride + j] - point[d])^2 for j in [begin, end).
  /// `coords` is dimension-major (structure of arrays).
  void (*squared_distances_soa)(const double* coords, std::size_t stride, std::size_t dim,
                                const double* point, std::size_t begin, std::size_t end,
                                double* out);

  /// For rows r in [row_begin, row_end):
  ///   y[r*width + c] = sum_j val[j] * x[col[j]*width + c]
  /// x and y are row-major blocks with `width` columns and must not alias.
  void (*csr_block_gather)(CsrView csr, const double* x, double* y, std::size_t width,
                           std::size_t row_begin, std::size_t row_end);
};

const KernelTable& scalar_kernels() noexcept;

/// True when the running CPU can execute `isa` and this build contains it.
bool isa_available(Isa isa) noexcept;

/// Kernels for a specific ISA. Throws std::invalid_argument when unavailable.
const KernelTable& kernels_for(Isa isa);

/// The active table. Defaults to the widest available ISA; the environment
/// variable CSP_SIMD=scalar|avx2|neon overrides the default.
const KernelTable& kernels() noexcept;

/// Switch the active table (tests and the CLI use this).
void select_isa(Isa isa);

}  // namespace csp::simd
