#include "listdefect/kernels.hpp"

#include <atomic>

#include "listdefect/error.hpp"

namespace listdefect {

namespace {

using Kernel = std::uint64_t (*)(const std::uint64_t*, const std::uint64_t*, std::size_t);

Kernel kernel_for(Isa isa) {
  switch (isa) {
#if defined(LISTDEFECT_HAVE_AVX2)
    case Isa::Avx2: return kernels::and_popcount_avx2;
#endif
#if defined(LISTDEFECT_HAVE_NEON)
    case Isa::Neon: return kernels::and_popcount_neon;
#endif
    default: return kernels::and_popcount_scalar;
  }
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(LISTDEFECT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(LISTDEFECT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa))
    fail(ErrorCode::InvalidArgument, std::string("ISA not available: ") + to_string(isa));
  active().store(isa, std::memory_order_relaxed);
}

void reset_isa() { active().store(detected_isa(), std::memory_order_relaxed); }

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  return kernel_for(active_isa())(a, b, words);
}

}  // namespace listdefect
