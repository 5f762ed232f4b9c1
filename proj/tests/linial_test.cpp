#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "listdefect/error.hpp"
#include "listdefect/linial.hpp"

using namespace listdefect;

namespace {

ColoredGraph ring(int n) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return ColoredGraph(n, e);
}

ColoredGraph clique(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return ColoredGraph(n, e);
}

ColoredGraph random_graph(int n, int cap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> deg(n, 0);
  std::vector<std::pair<int, int>> e;
  const double p = std::min(1.0, static_cast<double>(cap) / n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (std::bernoulli_distribution(p)(rng) && deg[u] < cap && deg[v] < cap) {
        e.emplace_back(u, v);
        ++deg[u];
        ++deg[v];
      }
  return ColoredGraph(n, e);
}

bool proper(const ColoredGraph& g, const std::vector<Color>& c) {
  for (const auto& e : g.edges())
    if (c[e.u] == c[e.v]) return false;
  return true;
}

}  // namespace

TEST(LinialMath, PrimesAndLogs) {
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(13));
  EXPECT_FALSE(is_prime(15));
  EXPECT_EQ(ceil_log(2, 8), 3);
  EXPECT_EQ(ceil_log(3, 10), 3);
  EXPECT_EQ(ceil_log(5, 5), 1);
}

// Property: a reduction round shrinks the palette while it is above the final size.
TEST(LinialSchedule, StrictlyShrinksUntilFinal) {
  for (std::int64_t palette : {8, 100, 1000, 100000, 1000000000}) {
    for (int degree : {1, 2, 3, 8, 16}) {
      const auto s = linial_schedule(palette, degree);
      std::int64_t cur = palette;
      for (const auto& st : s.steps) {
        EXPECT_TRUE(is_prime(st.q));
        const std::int64_t next = st.q * st.q;
        EXPECT_LT(next, cur) << palette << " " << degree;
        // Two polynomials of degree t agree on at most t points, so q > Δ·t separates them.
        EXPECT_GT(st.q, static_cast<std::int64_t>(degree) * st.degree);
        cur = next;
      }
      EXPECT_LE(s.palette, std::max<std::int64_t>(palette, 1));
    }
  }
}

// [TRIVIAL] Δ = 0: everyone takes color 0 without communication.
TEST(LinialColoring, IsolatedNodes) {
  ColoredGraph g(6, {});
  const auto r = linial_coloring(g);
  EXPECT_EQ(r.trace.rounds_elapsed, 0u);
  for (auto c : r.output.colors) EXPECT_EQ(c, 0);
}

// [DERIVED] ring of 8 with id coloring: proper, palette O(Δ²).
TEST(LinialColoring, RingOfEight) {
  const auto g = ring(8);
  const auto r = linial_coloring(g);
  EXPECT_TRUE(proper(g, r.output.colors));
  EXPECT_LE(r.palette, 8 * 4);
  for (auto c : r.output.colors) EXPECT_LT(c, r.palette);
}

// [DERIVED] K5: five distinct colors.
TEST(LinialColoring, CliqueDistinct) {
  const auto g = clique(5);
  const auto r = linial_coloring(g);
  EXPECT_EQ(std::set<Color>(r.output.colors.begin(), r.output.colors.end()).size(), 5u);
  EXPECT_LE(r.palette, 8 * 25);
}

TEST(LinialColoring, RandomGraphsProperWithSmallPalette) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_graph(200, 1 + static_cast<int>(seed % 9), seed);
    const auto r = linial_coloring(g);
    const std::int64_t d = std::max(1, g.max_degree());
    EXPECT_TRUE(proper(g, r.output.colors)) << seed;
    EXPECT_LE(r.palette, std::max<std::int64_t>(8 * d * d, 2)) << seed;
    EXPECT_LE(r.trace.rounds_elapsed, 6u) << seed;
  }
}

TEST(LinialColoring, UsesGivenInitialColoring) {
  auto g = ring(10);
  g.set_init_colors({0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, 2);
  const auto r = linial_coloring(g);
  EXPECT_TRUE(proper(g, r.output.colors));
  EXPECT_LE(r.palette, 2);
}

// [TRIVIAL] d >= β: a single color is valid.
TEST(DefectiveLinial, DefectDominatesOutdegree) {
  auto g = clique(5);
  g.orient_by_id();
  const auto r = defective_linial(g, 4);
  EXPECT_EQ(std::set<Color>(r.output.colors.begin(), r.output.colors.end()).size(), 1u);
}

// [TRIVIAL] d = 0 on an oriented ring is a proper coloring.
TEST(DefectiveLinial, ZeroDefectIsProper) {
  auto g = ring(12);
  g.orient_by_id();
  const auto r = defective_linial(g, 0);
  EXPECT_TRUE(proper(g, r.output.colors));
}

// [DERIVED] random DAG with β = 4, d = 1: at most one same-colored out-neighbor per node.
TEST(DefectiveLinial, RandomDagDefectOne) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = random_graph(60, 8, seed);
    std::mt19937_64 rng(seed);
    std::vector<int> rank(g.n());
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);
    // Orient toward higher rank, then drop edges until every out-degree is at most 4.
    std::vector<int> out(g.n(), 0);
    std::vector<bool> keep(g.edge_count(), false);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edges()[e];
      const int tail = rank[ed.u] < rank[ed.v] ? ed.u : ed.v;
      if (out[tail] < 4) {
        keep[e] = true;
        ++out[tail];
      }
    }
    auto h = g.edge_subgraph(keep);
    std::vector<std::pair<int, int>> arcs;
    for (const auto& ed : h.edges()) arcs.push_back(rank[ed.u] < rank[ed.v] ? std::pair(ed.u, ed.v) : std::pair(ed.v, ed.u));
    h.set_orientation(arcs);
    ASSERT_LE(h.max_beta(), 4);
    const auto r = defective_linial(h, 1);
    for (int v = 0; v < h.n(); ++v) {
      int same = 0;
      for (int u : h.out_neighbors(v)) same += r.output.colors[u] == r.output.colors[v];
      EXPECT_LE(same, 1) << "seed " << seed << " node " << v;
    }
  }
}

TEST(DefectiveLinial, NeedsOrientation) {
  const auto g = ring(5);
  EXPECT_THROW(defective_linial(g, 1), Error);
}
