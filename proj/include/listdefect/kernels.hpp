#pragma once

#include <cstddef>
#include <cstdint>

namespace listdefect {

enum class Isa { Scalar, Avx2, Neon };

const char* to_string(Isa isa);
bool isa_available(Isa isa);
// Best ISA compiled in and supported by the running CPU.
Isa detected_isa();
Isa active_isa();
// Pins dispatch to one ISA; throws InvalidArgument when it is unavailable.
void force_isa(Isa isa);
void reset_isa();

// popcount(a & b) over `words` 64-bit words.
std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);

namespace kernels {
std::uint64_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words);
#if defined(LISTDEFECT_HAVE_AVX2)
std::uint64_t and_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words);
#endif
#if defined(LISTDEFECT_HAVE_NEON)
std::uint64_t and_popcount_neon(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words);
#endif
}  // namespace kernels

}  // namespace listdefect
