#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "listdefect/graph.hpp"

namespace listdefect {

struct SeqResult {
  ColoringOutput output;
  std::size_t recolorings = 0;
  // Potential before the first step and after every recoloring.
  std::vector<std::int64_t> potentials;
};

// Potential M + Σ_v (deg(v) - min(d_v(x_v), deg(v))) for the given colors.
std::int64_t ldc_potential(const ColoredGraph& graph, const LdcInstance& inst,
                           const std::vector<Color>& colors);

// Local search over all neighbors (defective semantics, g must be 0).
// Requires Σ(d+1) > deg everywhere; throws ConditionViolated otherwise.
SeqResult sequential_ldc(const ColoredGraph& graph, const LdcInstance& inst);

// Requires Σ(2d+1) > deg everywhere. Output orientation is total.
SeqResult sequential_arbdefective(const ColoredGraph& graph, const LdcInstance& inst);

struct ExhaustiveResult {
  bool sat = false;
  ColoringOutput output;  // populated when sat
  std::uint64_t leaves = 0;
};

inline constexpr std::uint64_t kDefaultExhaustiveCap = 10'000'000;

// Complete search over Π|L_v| assignments in node-id order. Honors flavor and g.
ExhaustiveResult exhaustive_solve(const ColoredGraph& graph, const LdcInstance& inst,
                                  std::uint64_t cap = kDefaultExhaustiveCap);

// Orients the conflict edges so every node keeps at most d_v(φ(v)) of them outgoing.
// Returns the per-edge orientation, or nullopt when no such orientation exists.
std::optional<std::vector<std::int8_t>> balanced_orientation(const ColoredGraph& graph,
                                                             const LdcInstance& inst,
                                                             const std::vector<Color>& colors);

}  // namespace listdefect
