#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace csp::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(CSP_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("SIMD kernels unavailable: " + std::string(isa_name(isa)));
  switch (isa) {
#if defined(CSP_HAVE_AVX2_KERNELS)
    case Isa::avx2: return detail::avx2_table();
#endif
#if defined(__aarch64__)
    case Isa::neon: return detail::neon_table();
#endif
    default: return scalar_kernels();
  }
}

namespace {

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("CSP_SIMD")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
      if (want == isa_name(isa) && isa_available(isa)) return &kernels_for(isa);
  }
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (isa_available(isa)) return &kernels_for(isa);
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& kernels() noexcept { return *active().load(std::memory_order_acquire); }

void select_isa(Isa isa) { active().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace csp::simd
