#pragma once

#include <cstdint>
#include <vector>

#include "listdefect/graph.hpp"
#include "listdefect/sim.hpp"

namespace listdefect {

// One polynomial color-reduction round over GF(q), polynomials of degree `degree`.
struct LinialStep {
  std::int64_t q;
  int degree;
  bool defective = false;
  // Bound on same-colored out-neighbors after this step (defective steps only).
  std::int64_t defect_after = 0;
};

struct LinialSchedule {
  std::vector<LinialStep> steps;
  std::int64_t palette = 0;  // final palette size
  bool matching_round = false;  // max degree 1: one exchange round to two colors
};

bool is_prime(std::int64_t x);
// Smallest t with q^t >= p.
int ceil_log(std::int64_t q, std::int64_t p);
// Proper reduction from palette p against `degree` constrained neighbors.
LinialSchedule linial_schedule(std::int64_t palette, int degree);
// Oriented d-defective reduction; beta bounds every out-degree.
LinialSchedule defective_linial_schedule(std::int64_t palette, int beta, std::int64_t d);

struct LinialRun : AlgorithmRun {
  std::int64_t palette = 0;
};

// Proper coloring with palette O(Δ²) seeded by the graph's initial coloring.
LinialRun linial_coloring(const ColoredGraph& graph, const RunConfig& config = {});
// Oriented: every node has at most d out-neighbors sharing its color.
LinialRun defective_linial(const ColoredGraph& graph, std::int64_t d,
                           const RunConfig& config = {});

}  // namespace listdefect
