#pragma once

#include "csp/simd/kernels.hpp"

namespace csp::simd::detail {

const KernelTable& avx2_table() noexcept;
const KernelTable& neon_table() noexcept;

}  // namespace csp::simd::detail
