#include "listdefect/color_bitset.hpp"

#include <algorithm>
#include <bit>

#include "listdefect/error.hpp"
#include "listdefect/kernels.hpp"

namespace listdefect {

ColorBitset::ColorBitset(Color base, std::size_t span)
    : base_(base), span_(span), bits_((span + 63) / 64, 0) {}

ColorBitset ColorBitset::from(const std::vector<Color>& colors, Color base, std::size_t span) {
  ColorBitset out(base, span);
  for (auto c : colors) out.set(c);
  return out;
}

void ColorBitset::set(Color c) {
  const auto off = c - base_;
  if (off < 0 || static_cast<std::size_t>(off) >= span_)
    fail(ErrorCode::InvalidArgument, "color outside bitset window");
  bits_[off >> 6] |= std::uint64_t{1} << (off & 63);
}

bool ColorBitset::test(Color c) const {
  const auto off = c - base_;
  if (off < 0 || static_cast<std::size_t>(off) >= span_) return false;
  return (bits_[off >> 6] >> (off & 63)) & 1U;
}

std::size_t ColorBitset::count() const {
  std::size_t total = 0;
  for (auto w : bits_) total += std::popcount(w);
  return total;
}

ColorBitset ColorBitset::shifted(std::int64_t s) const {
  ColorBitset out(base_, span_);
  const std::size_t n = bits_.size();
  if (n == 0) return out;
  const std::int64_t span = static_cast<std::int64_t>(span_);
  if (s >= span || -s >= span) return out;
  const std::size_t word_shift = static_cast<std::size_t>(s >= 0 ? s : -s) / 64;
  const unsigned bit_shift = static_cast<unsigned>((s >= 0 ? s : -s) % 64);
  if (s >= 0) {
    for (std::size_t i = n; i-- > word_shift;) {
      std::uint64_t w = bits_[i - word_shift] << bit_shift;
      if (bit_shift && i - word_shift > 0) w |= bits_[i - word_shift - 1] >> (64 - bit_shift);
      out.bits_[i] = w;
    }
  } else {
    for (std::size_t i = 0; i + word_shift < n; ++i) {
      std::uint64_t w = bits_[i + word_shift] >> bit_shift;
      if (bit_shift && i + word_shift + 1 < n) w |= bits_[i + word_shift + 1] << (64 - bit_shift);
      out.bits_[i] = w;
    }
  }
  if (span_ % 64) out.bits_[n - 1] &= (std::uint64_t{1} << (span_ % 64)) - 1;
  return out;
}

std::uint64_t intersect_count(const ColorBitset& a, const ColorBitset& b) {
  if (a.base() != b.base() || a.span() != b.span())
    fail(ErrorCode::InvalidArgument, "bitset windows differ");
  return and_popcount(a.data(), b.data(), a.words());
}

std::uint64_t conflict_sum_merge(const std::vector<Color>& a, const std::vector<Color>& b,
                                 std::int64_t g) {
  std::uint64_t total = 0;
  std::size_t lo = 0;
  for (auto x : a) {
    while (lo < b.size() && b[lo] < x - g) ++lo;
    for (std::size_t j = lo; j < b.size() && b[j] <= x + g; ++j) ++total;
  }
  return total;
}

std::uint64_t conflict_sum(const std::vector<Color>& a, const std::vector<Color>& b,
                           std::int64_t g) {
  if (a.empty() || b.empty()) return 0;
  const Color lo = std::min(a.front(), b.front());
  const Color hi = std::max(a.back(), b.back());
  const auto span = static_cast<std::size_t>(hi - lo + 1);
  // Small inputs are cheaper to merge than to pack.
  if (span > kBitsetSpanLimit || a.size() + b.size() < 32) return conflict_sum_merge(a, b, g);
  const auto ba = ColorBitset::from(a, lo, span);
  const auto bb = ColorBitset::from(b, lo, span);
  std::uint64_t total = 0;
  for (std::int64_t s = -g; s <= g; ++s) total += intersect_count(ba.shifted(s), bb);
  return total;
}

}  // namespace listdefect
