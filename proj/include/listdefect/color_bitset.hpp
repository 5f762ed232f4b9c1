#pragma once

#include <cstdint>
#include <vector>

#include "listdefect/graph.hpp"

namespace listdefect {

// Set of colors in [base, base + span) as packed 64-bit words.
class ColorBitset {
 public:
  ColorBitset() = default;
  ColorBitset(Color base, std::size_t span);
  static ColorBitset from(const std::vector<Color>& colors, Color base, std::size_t span);

  void set(Color c);
  bool test(Color c) const;
  std::size_t count() const;
  // Element c becomes c + s; elements leaving the window are dropped.
  ColorBitset shifted(std::int64_t s) const;

  Color base() const { return base_; }
  std::size_t span() const { return span_; }
  std::size_t words() const { return bits_.size(); }
  const std::uint64_t* data() const { return bits_.data(); }

 private:
  Color base_ = 0;
  std::size_t span_ = 0;
  std::vector<std::uint64_t> bits_;
};

// |a ∩ b| through the dispatched kernel; both sets must share base and span.
std::uint64_t intersect_count(const ColorBitset& a, const ColorBitset& b);

// Spans above this use the merge path instead of bitsets.
inline constexpr std::size_t kBitsetSpanLimit = std::size_t{1} << 20;

// Number of pairs (x, y) in a × b with |x - y| <= g; a and b sorted ascending.
std::uint64_t conflict_sum(const std::vector<Color>& a, const std::vector<Color>& b,
                           std::int64_t g);
// Reference merge implementation, independent of the kernels.
std::uint64_t conflict_sum_merge(const std::vector<Color>& a, const std::vector<Color>& b,
                                 std::int64_t g);

}  // namespace listdefect
