#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "listdefect/graph.hpp"
#include "listdefect/sim.hpp"
#include "listdefect/space_reduction.hpp"

namespace listdefect {

enum class ArbdefMode { Auto, Sequential, DefectiveLinial };

struct ArbdefRun : AlgorithmRun {
  std::int64_t classes = 0;  // colors actually used are in [0, classes)
  std::string route;
};

// δ-arbdefective coloring: colors plus a total orientation under which every node has at
// most δ same-colored out-neighbors. Needs q·(δ+1) > Δ (ConditionViolated).
// Auto uses defective_linial when the graph is oriented, the doubled-defect route otherwise.
ArbdefRun arbdefective_subroutine(const ColoredGraph& graph, std::int64_t q, std::int64_t delta,
                                  ArbdefMode mode = ArbdefMode::Auto, const RunConfig& run = {});

struct StageRow {
  int stage;
  int cls;
  std::size_t colored;
  int max_uncolored_degree;
  std::size_t rounds;
  std::uint64_t max_bits;
};

struct FrameworkParams {
  ArbdefMode arbdef = ArbdefMode::Auto;
  // Retry each class with the sequential solver when the inner solver fails fast.
  bool sequential_fallback = true;
  RunConfig run;
};

struct FrameworkRun : AlgorithmRun {
  std::vector<StageRow> stages;
  int stage_count = 0;
  std::size_t inner_successes = 0;
  std::size_t fallbacks = 0;
  // stage,class,colored_count,max_uncolored_degree,rounds,max_bits
  std::string stages_csv() const;
};

// Needs Σ(d+1) > deg per node (ConditionViolated). Output orientation is total; the
// instance's flavor is read as arbdefective regardless of its tag.
FrameworkRun degree_halving_framework(const ColoredGraph& graph, const LdcInstance& inst,
                                      const InnerSolver& inner, const FrameworkParams& params = {});

struct PipelineParams {
  MainParams inner;       // scaled constants for the space-reduced inner solver
  double kappa = 1.0;
  std::optional<int> r;   // default 2·⌈log|C| / log Δ⌉
  FrameworkParams framework;
};

// Linial, then message-preset space-reduced main OLDC as the inner solver of the framework.
// Every engine run shares params.framework.run (bit budget and round cap).
FrameworkRun congest_pipeline(const ColoredGraph& graph, const LdcInstance& inst,
                              const PipelineParams& params);

}  // namespace listdefect
