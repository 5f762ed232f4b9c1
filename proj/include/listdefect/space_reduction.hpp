#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "listdefect/graph.hpp"
#include "listdefect/oldc_main.hpp"
#include "listdefect/sim.hpp"

namespace listdefect {

// An oriented list defective solver that handles Σ(d+1)^{1+ν} >= β^{1+ν}·κ.
struct InnerSolver {
  std::string name;
  double nu = 1.0;
  double kappa = 1.0;
  std::function<AlgorithmRun(const ColoredGraph&, const LdcInstance&, const RunConfig&)> solve;
};

InnerSolver main_oldc_inner(const MainParams& params, double kappa);
InnerSolver multi_defect_inner(const OldcParams& params, double kappa);
// Centralized local search; needs Σ(d+1) > deg, so ν = 0, κ = 1 only in that reading.
InnerSolver sequential_inner();

// Smallest k with p^k >= n (k >= 1).
int reduction_depth(std::uint64_t space_size, std::uint64_t p);
// Smallest p with p^r >= n.
std::uint64_t preset_message_p(std::uint64_t space_size, int r);
// 2^ceil(sqrt(log2 β · log2 κ)), at least 2.
std::uint64_t preset_time_p(std::uint64_t beta, double kappa);
// ⌊(S / κ^{levels-1})^{1/(1+ν)}⌋ with S = Σ_{x in subspace}(d+1)^{1+ν}.
std::int64_t subspace_defect(double energy, double kappa, int levels, double nu);

struct SpaceReducedRun : AlgorithmRun {
  std::uint64_t p = 0;
  int depth = 0;
  std::vector<std::vector<int>> path;  // per level, chosen chunk per node
  std::vector<std::uint64_t> level_max_bits;
  std::vector<double> min_lambda_sum;  // per non-final level
};

// Contiguous chunks of the sorted color space, padded with unreachable dummies to p^k.
SpaceReducedRun space_reduced_oldc(const ColoredGraph& graph, const LdcInstance& inst,
                                   std::uint64_t p, const InnerSolver& inner,
                                   const RunConfig& run = {});

SpaceReducedRun preset_message(const ColoredGraph& graph, const LdcInstance& inst, int r,
                               const InnerSolver& inner, const RunConfig& run = {});
SpaceReducedRun preset_time(const ColoredGraph& graph, const LdcInstance& inst,
                            const InnerSolver& inner, const RunConfig& run = {});

}  // namespace listdefect
