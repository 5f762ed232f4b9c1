#include <bit>

#include "listdefect/kernels.hpp"

namespace listdefect::kernels {

std::uint64_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

}  // namespace listdefect::kernels
