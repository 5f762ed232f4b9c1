#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "listdefect/instance_io.hpp"

namespace listdefect {

enum class GraphFamily { Ring, Clique, RandomGnp, RandomDag, PowerLaw };
enum class ListModel { DegreePlusOne, UniformK, DefectBudget };
// Condition a defect-budget instance is drawn to satisfy per node.
enum class Target { Ldc, Arb, SimpleOldc, MainOldc };

GraphFamily parse_family(const std::string& name);
ListModel parse_list_model(const std::string& name);
Target parse_target(const std::string& name);

struct GenerateParams {
  GraphFamily family = GraphFamily::RandomGnp;
  int n = 16;
  int delta = 4;                   // degree cap; rings and cliques fix their own
  ListModel lists = ListModel::DegreePlusOne;
  std::uint64_t color_space = 0;   // 0 means Δ+1
  int k = 3;                       // list size for uniform-k and defect-budget
  Target target = Target::Ldc;
  std::int64_t g = 0;
  // Scaled constants for the OLDC targets.
  double alpha = 1.0;
  std::uint64_t tau = 1;
  std::uint64_t tau_bar = 1;
  std::uint64_t h_prime = 1;
  int slack = 1;                   // extra defect units spread at random after the target holds
  std::optional<Flavor> flavor;    // default follows the target
  std::uint64_t seed = 1;
};

// Deterministic for a given seed. Orientation: random topological order for random-dag,
// lower id to higher id otherwise. Initial colors are greedy in id order.
// Throws InfeasibleParams when the parameters admit no instance.
Instance generate_instance(const GenerateParams& params);

}  // namespace listdefect
