#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "listdefect/conflict.hpp"
#include "listdefect/graph.hpp"
#include "listdefect/sim.hpp"
#include "listdefect/type_table.hpp"

namespace listdefect {

struct OldcParams {
  double alpha = 6.0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> tau_override;  // (τ, τ′)
  std::optional<std::uint64_t> h_override;
  // Size of the color space the lists are drawn from; 0 means the instance's.
  std::uint64_t color_space_size = 0;
  std::uint64_t subset_cap = std::uint64_t{1} << 16;
  std::uint64_t step_cap = std::uint64_t{1} << 24;
  bool use_cache = true;
  RunConfig run;
};

struct OldcRun : AlgorithmRun {
  std::uint64_t h = 0;
  std::uint64_t tau = 0;
  std::uint64_t tau_prime = 0;
  double effective_alpha = 0;   // min over nontrivial nodes of the condition ratio
  std::vector<int> cls;         // γ-class per node, -1 for trivial nodes
  std::vector<ColorSet> chosen;  // C_v per node
  std::vector<std::int64_t> frequency;  // f_v(x_v) per node
  std::vector<std::int64_t> p1_conflicts;  // lower/equal-class out-neighbors whose C_u conflicts
  std::size_t table_types = 0;
};

// Smallest i with 2^i·(d+1) >= 2β.
int single_defect_class(std::int64_t beta, std::int64_t d);

// One defect per node. lists[v] must be sorted. Needs an orientation.
// Throws ListTooSmall, GreedyExhausted, CapExceeded, BudgetViolation or NodeFailure.
OldcRun single_defect_oldc(const ColoredGraph& graph, const std::vector<ColorSet>& lists,
                           const std::vector<std::int64_t>& defects, std::int64_t g,
                           const OldcParams& params);

// Largest power of two not above x (x >= 1).
std::int64_t floor_pow2(std::int64_t x);
std::int64_t ceil_pow2(std::int64_t x);

// Rounds d+1 down and β up to powers of two, keeps the class with the most energy
// |L_i|·(d+1)², and delegates to single_defect_oldc. Gate: Σ(d+1)² >= αβ²τh(2g+1).
OldcRun multi_defect_oldc(const ColoredGraph& graph, const LdcInstance& inst,
                          const OldcParams& params);

// Index of the class maximizing |L_i|·(d_i+1)²; ties go to the smallest class.
// energies[i] = |L_i|·(d_i+1)².
std::size_t pick_energy_class(const std::vector<std::uint64_t>& energies);

}  // namespace listdefect
