#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "listdefect/error.hpp"
#include "listdefect/graph.hpp"
#include "listdefect/instance_io.hpp"
#include "test_support.hpp"

using namespace listdefect;

namespace {

LdcInstance single_list(int n, std::vector<Color> list, std::vector<std::int64_t> d, Flavor f) {
  LdcInstance inst;
  inst.flavor = f;
  inst.color_space = list;
  inst.lists.assign(n, list);
  inst.defects.assign(n, d);
  return inst;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

// [TRIVIAL] monochromatic edge with zero defect.
TEST(ValidateLdc, MonochromaticEdgeZeroDefectIsInvalid) {
  ColoredGraph g(2, {{0, 1}});
  auto inst = single_list(2, {7}, {0}, Flavor::Defective);
  ColoringOutput out{{7, 7}, {}};
  const auto rep = validate_ldc(g, inst, out);
  EXPECT_FALSE(rep.valid);
  EXPECT_EQ(rep.conflicts, (std::vector<int>{1, 1}));
  EXPECT_EQ(rep.violators, (std::vector<int>{0, 1}));
}

// [TRIVIAL] defect 1 absorbs one conflict.
TEST(ValidateLdc, DefectOneAbsorbsConflict) {
  ColoredGraph g(2, {{0, 1}});
  auto inst = single_list(2, {7}, {1}, Flavor::Defective);
  EXPECT_TRUE(validate_ldc(g, inst, {{7, 7}, {}}).valid);
}

// [DERIVED] path u->v->w, all color 3, d = 1: each node has at most one same-colored out-neighbor.
TEST(ValidateLdc, OrientedPathDirectCount) {
  ColoredGraph g(3, {{0, 1}, {1, 2}});
  g.set_orientation({{0, 1}, {1, 2}});
  auto inst = single_list(3, {3}, {1}, Flavor::Oriented);
  const auto rep = validate_ldc(g, inst, {{3, 3, 3}, {}});
  EXPECT_TRUE(rep.valid);
  EXPECT_EQ(rep.conflicts, (std::vector<int>{1, 1, 0}));
}

TEST(ValidateLdc, ProximityCountsNearbyColors) {
  ColoredGraph g(2, {{0, 1}});
  LdcInstance inst;
  inst.color_space = {1, 2};
  inst.lists = {{1}, {2}};
  inst.defects = {{0}, {0}};
  inst.g = 0;
  EXPECT_TRUE(validate_ldc(g, inst, {{1, 2}, {}}).valid);
  inst.g = 1;
  EXPECT_FALSE(validate_ldc(g, inst, {{1, 2}, {}}).valid);
}

TEST(ValidateLdc, RejectsOffListAndMissingColor) {
  ColoredGraph g(2, {{0, 1}});
  auto inst = single_list(2, {1, 2}, {0, 0}, Flavor::Defective);
  EXPECT_EQ(code_of([&] { validate_ldc(g, inst, {{1, 5}, {}}); }), ErrorCode::ColorNotInList);
  EXPECT_EQ(code_of([&] { validate_ldc(g, inst, {{1, kNoColor}, {}}); }), ErrorCode::MissingColor);
  EXPECT_EQ(code_of([&] { validate_ldc(g, inst, {{1}, {}}); }), ErrorCode::MissingColor);
}

TEST(ValidateLdc, FlavorsNeedOrientation) {
  ColoredGraph g(2, {{0, 1}});
  auto inst = single_list(2, {1}, {1}, Flavor::Oriented);
  EXPECT_EQ(code_of([&] { validate_ldc(g, inst, {{1, 1}, {}}); }), ErrorCode::MissingOrientation);
  inst.flavor = Flavor::Arbdefective;
  EXPECT_EQ(code_of([&] { validate_ldc(g, inst, {{1, 1}, {0}}); }), ErrorCode::MissingOrientation);
  EXPECT_TRUE(validate_ldc(g, inst, {{1, 1}, {-1}}).valid);
}

// [DERIVED] 2·(1+1) = 4 > 3.
TEST(ExistenceCondition, K4TwoColorsDefectOne) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) e.emplace_back(u, v);
  ColoredGraph g(4, e);
  auto inst = single_list(4, {0, 1}, {1, 1}, Flavor::Defective);
  for (bool ok : check_existence_condition(g, inst)) EXPECT_TRUE(ok);
  // [TRIVIAL] three colors with defect 0 give Σ = 3 = deg; the condition is strict.
  auto tight = single_list(4, {0, 1, 2}, {0, 0, 0}, Flavor::Defective);
  for (bool ok : check_existence_condition(g, tight)) EXPECT_FALSE(ok);
}

// [DERIVED] arbdefective K5, two colors defect 1: Σ(2d+1) = 6 > 4.
TEST(ExistenceCondition, ArbdefectiveK5) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) e.emplace_back(u, v);
  ColoredGraph g(5, e);
  auto inst = single_list(5, {0, 1}, {1, 1}, Flavor::Arbdefective);
  for (bool ok : check_existence_condition(g, inst)) EXPECT_TRUE(ok);
  inst.flavor = Flavor::Defective;  // Σ(d+1) = 4 is not above 4
  for (bool ok : check_existence_condition(g, inst)) EXPECT_FALSE(ok);
}

TEST(ColoredGraph, RejectsSelfLoopsAndMultiEdges) {
  EXPECT_EQ(code_of([] { ColoredGraph(2, {{0, 0}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { ColoredGraph(2, {{0, 1}, {1, 0}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { ColoredGraph(2, {{0, 2}}); }), ErrorCode::InvalidArgument);
}

TEST(ColoredGraph, InitColorsMustBeProper) {
  ColoredGraph g(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(code_of([&] { g.set_init_colors({0, 0, 1}, 2); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { g.set_init_colors({0, 2, 0}, 2); }), ErrorCode::InvalidArgument);
  g.set_init_colors({0, 1, 0}, 2);
  EXPECT_EQ(g.m(), 2);
}

// [TRIVIAL] β floors at 1 for sinks.
TEST(ColoredGraph, BetaFloorsAtOne) {
  ColoredGraph g(4, {{0, 1}, {0, 2}, {0, 3}});
  g.orient_by_id();
  EXPECT_EQ(g.out_degree(0), 3);
  EXPECT_EQ(g.beta(0), 3);
  EXPECT_EQ(g.out_degree(1), 0);
  EXPECT_EQ(g.beta(1), 1);
  EXPECT_EQ(g.max_beta(), 3);
}

TEST(ColoredGraph, OrientationEachEdgeOnce) {
  ColoredGraph g(3, {{0, 1}, {1, 2}});
  EXPECT_FALSE(g.has_orientation());
  EXPECT_EQ(code_of([&] { g.set_orientation({{0, 1}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { g.set_orientation({{0, 1}, {1, 0}}); }), ErrorCode::InvalidArgument);
  g.set_orientation({{1, 0}, {1, 2}});
  EXPECT_TRUE(g.has_orientation());
  EXPECT_EQ(g.out_neighbors(1), (std::vector<int>{0, 2}));
  EXPECT_EQ(g.out_degree(0), 0);
  g.clear_orientation();
  EXPECT_FALSE(g.has_orientation());
}

TEST(ColoredGraph, EdgelessSubgraphKeepsOrientationFlag) {
  ColoredGraph g(3, {{0, 1}, {1, 2}});
  g.orient_by_id();
  const auto sub = g.edge_subgraph({false, false});
  EXPECT_EQ(sub.edge_count(), 0u);
  EXPECT_TRUE(sub.has_orientation());
  const auto ind = g.induced({0, 2});
  EXPECT_EQ(ind.n(), 2);
  EXPECT_EQ(ind.edge_count(), 0u);
  EXPECT_TRUE(ind.has_orientation());
}

TEST(ColoredGraph, InducedKeepsColorsAndDirections) {
  ColoredGraph g(4, {{0, 1}, {1, 2}, {2, 3}});
  g.set_init_colors({0, 1, 0, 1}, 2);
  g.set_orientation({{1, 0}, {2, 1}, {2, 3}});
  const auto sub = g.induced({1, 2, 3});
  ASSERT_EQ(sub.n(), 3);
  EXPECT_EQ(sub.init_color(0), 1);
  EXPECT_EQ(sub.init_color(1), 0);
  EXPECT_EQ(sub.out_neighbors(1), (std::vector<int>{0, 2}));
}

TEST(LdcInstance, ValidateRejectsBadShapes) {
  LdcInstance inst;
  inst.color_space = {0, 1};
  inst.lists = {{0, 3}};
  inst.defects = {{0, 0}};
  EXPECT_EQ(code_of([&] { inst.validate(1); }), ErrorCode::Schema);
  inst.lists = {{0, 1}};
  inst.defects = {{0}};
  EXPECT_EQ(code_of([&] { inst.validate(1); }), ErrorCode::Schema);
  inst.defects = {{0, -1}};
  EXPECT_EQ(code_of([&] { inst.validate(1); }), ErrorCode::Schema);
  inst.defects = {{0, 2}};
  EXPECT_NO_THROW(inst.validate(1));
}

TEST(InstanceIo, RoundTripIsByteIdentical) {
  Instance a;
  a.graph = ColoredGraph(3, {{0, 1}, {1, 2}});
  a.graph.set_init_colors({0, 1, 0}, 2);
  a.graph.set_orientation({{1, 0}, {1, 2}});
  a.inst.color_space = {2, 5, 9};
  a.inst.lists = {{2, 5}, {5}, {2, 9}};
  a.inst.defects = {{0, 1}, {2}, {1, 0}};
  a.inst.flavor = Flavor::Oriented;
  const auto text = dump_instance(a);
  const auto b = parse_instance(nlohmann::json::parse(text));
  EXPECT_EQ(dump_instance(b), text);
  EXPECT_EQ(b.graph.out_neighbors(1), (std::vector<int>{0, 2}));
  EXPECT_EQ(b.inst.defect(0, 5), 1);
  EXPECT_EQ(b.graph.m(), 2);
}

TEST(InstanceIo, SchemaErrors) {
  EXPECT_EQ(code_of([] { parse_instance(nlohmann::json::parse(R"({"n":2})")); }), ErrorCode::Schema);
  EXPECT_EQ(code_of([] {
              parse_instance(nlohmann::json::parse(
                  R"({"n":1,"edges":[],"color_space":[0],"lists":[[0]],"defects":[{"0":0}],"flavor":"weird","g":0})"));
            }),
            ErrorCode::Schema);
}

// Property: the validator agrees with an independent neighbor scan on random instances.
TEST(ValidateLdcProperty, AgreesWithBruteForceScan) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (std::bernoulli_distribution(0.4)(rng)) e.emplace_back(u, v);
    ColoredGraph g(n, e);
    g.orient_by_id();
    const auto flavor = static_cast<Flavor>(trial % 3);
    auto inst = testsupport::random_budget_instance(g, rng, 4, 1, flavor);
    inst.g = trial % 2;
    ColoringOutput out;
    for (int v = 0; v < n; ++v)
      out.colors.push_back(inst.lists[v][std::uniform_int_distribution<std::size_t>(0, inst.lists[v].size() - 1)(rng)]);
    for (std::size_t i = 0; i < g.edge_count(); ++i) out.orientation.push_back(std::bernoulli_distribution(0.5)(rng) ? 1 : -1);
    EXPECT_EQ(validate_ldc(g, inst, out).valid, testsupport::brute_force_valid(g, inst, out)) << "trial " << trial;
  }
}

// Property: raising a defect never turns a valid output invalid.
TEST(ValidateLdcProperty, MonotoneInDefects) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 7)(rng);
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (std::bernoulli_distribution(0.5)(rng)) e.emplace_back(u, v);
    ColoredGraph g(n, e);
    g.orient_by_id();
    auto inst = testsupport::random_budget_instance(g, rng, 3, 1, static_cast<Flavor>(trial % 3));
    ColoringOutput out;
    for (int v = 0; v < n; ++v) out.colors.push_back(inst.lists[v].front());
    for (std::size_t i = 0; i < g.edge_count(); ++i) out.orientation.push_back(1);
    if (!validate_ldc(g, inst, out).valid) continue;
    const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
    for (auto& d : inst.defects[v]) ++d;
    EXPECT_TRUE(validate_ldc(g, inst, out).valid);
  }
}

// Property: a proper list coloring with zero defects passes under all three flavors.
TEST(ValidateLdcProperty, ProperColoringValidForEveryFlavor) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 9)(rng);
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (std::bernoulli_distribution(0.5)(rng)) e.emplace_back(u, v);
    ColoredGraph g(n, e);
    std::vector<std::pair<int, int>> arcs;
    for (const auto& ed : g.edges())
      arcs.push_back(std::bernoulli_distribution(0.5)(rng) ? std::pair(ed.u, ed.v) : std::pair(ed.v, ed.u));
    g.set_orientation(arcs);
    LdcInstance inst;
    for (int c = 0; c < n; ++c) inst.color_space.push_back(c);
    ColoringOutput out;
    for (int v = 0; v < n; ++v) {
      inst.lists.push_back({v});
      inst.defects.push_back({0});
      out.colors.push_back(v);
    }
    for (std::size_t i = 0; i < g.edge_count(); ++i) out.orientation.push_back(std::bernoulli_distribution(0.5)(rng) ? 1 : -1);
    for (auto f : {Flavor::Defective, Flavor::Oriented, Flavor::Arbdefective}) {
      inst.flavor = f;
      EXPECT_TRUE(validate_ldc(g, inst, out).valid);
    }
  }
}

// [DERIVED] connected graph counts on 1..6 nodes: 1, 1, 2, 6, 21, 112.
TEST(TestSupport, ConnectedGraphEnumerationCounts) {
  const std::vector<std::size_t> expect{1, 1, 2, 6, 21, 112};
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(testsupport::connected_graphs(n).size(), expect[n - 1]) << n;
}
