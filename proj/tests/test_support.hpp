#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "listdefect/graph.hpp"

namespace testsupport {

using EdgeList = std::vector<std::pair<int, int>>;

// Edge bitmask over pairs (i, j), i < j, indexed row by row.
inline int pair_index(int n, int i, int j) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

inline std::uint32_t permuted_code(int n, std::uint32_t code, const std::vector<int>& perm) {
  std::uint32_t out = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (code >> pair_index(n, i, j) & 1u) {
        int a = perm[i], b = perm[j];
        if (a > b) std::swap(a, b);
        out |= 1u << pair_index(n, a, b);
      }
  return out;
}

// Minimum code over all relabelings: equal iff isomorphic.
inline std::uint32_t canonical_code(int n, std::uint32_t code) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = code;
  while (std::next_permutation(perm.begin(), perm.end())) best = std::min(best, permuted_code(n, code, perm));
  return best;
}

inline bool connected(int n, std::uint32_t code) {
  std::vector<int> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n; ++u) {
      if (u == v || seen[u]) continue;
      const int a = std::min(u, v), b = std::max(u, v);
      if (code >> pair_index(n, a, b) & 1u) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

inline EdgeList decode(int n, std::uint32_t code) {
  EdgeList e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (code >> pair_index(n, i, j) & 1u) e.emplace_back(i, j);
  return e;
}

// One representative per isomorphism class, all graphs on n nodes (n <= 7).
// Extends every class on n-1 nodes by one vertex, then deduplicates canonically.
inline std::vector<std::uint32_t> all_graph_classes(int n) {
  if (n == 1) return {0u};
  const auto prev = all_graph_classes(n - 1);
  std::set<std::uint32_t> seen;
  for (auto code : prev) {
    std::uint32_t lifted = 0;
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n - 1; ++j)
        if (code >> pair_index(n - 1, i, j) & 1u) lifted |= 1u << pair_index(n, i, j);
    for (std::uint32_t nb = 0; nb < (1u << (n - 1)); ++nb) {
      std::uint32_t c = lifted;
      for (int i = 0; i < n - 1; ++i)
        if (nb >> i & 1u) c |= 1u << pair_index(n, i, n - 1);
      seen.insert(canonical_code(n, c));
    }
  }
  return {seen.begin(), seen.end()};
}

inline std::vector<EdgeList> connected_graphs(int n) {
  std::vector<EdgeList> out;
  for (auto code : all_graph_classes(n))
    if (connected(n, code)) out.push_back(decode(n, code));
  return out;
}

// Independent conflict count: scans adjacency directly, ignoring validate_ldc.
inline bool brute_force_valid(const listdefect::ColoredGraph& g, const listdefect::LdcInstance& inst,
                              const listdefect::ColoringOutput& out) {
  for (int v = 0; v < g.n(); ++v) {
    const auto x = out.colors[v];
    const auto d = inst.defect(v, x);
    if (d < 0) return false;
    std::int64_t same = 0;
    for (std::size_t id = 0; id < g.edge_count(); ++id) {
      const auto& e = g.edges()[id];
      if (e.u != v && e.v != v) continue;
      const int u = e.u == v ? e.v : e.u;
      const auto diff = out.colors[u] - x;
      if (diff > inst.g || -diff > inst.g) continue;
      bool counts = true;
      if (inst.flavor == listdefect::Flavor::Oriented) counts = (g.forward(id) ? e.u : e.v) == v;
      if (inst.flavor == listdefect::Flavor::Arbdefective) counts = (out.orientation[id] > 0 ? e.u : e.v) == v;
      if (counts) ++same;
    }
    if (same > d) return false;
  }
  return true;
}

// Random lists over [0, colors) with defects grown one unit at a time until
// Σ(factor·d + 1) > deg, factor 1 for the defective condition and 2 for the arbdefective one.
inline listdefect::LdcInstance random_budget_instance(const listdefect::ColoredGraph& g, std::mt19937_64& rng,
                                                      int colors, std::int64_t factor,
                                                      listdefect::Flavor flavor) {
  listdefect::LdcInstance inst;
  inst.flavor = flavor;
  for (int c = 0; c < colors; ++c) inst.color_space.push_back(c);
  inst.lists.resize(g.n());
  inst.defects.resize(g.n());
  for (int v = 0; v < g.n(); ++v) {
    std::vector<listdefect::Color> all(inst.color_space);
    std::shuffle(all.begin(), all.end(), rng);
    const int k = std::uniform_int_distribution<int>(1, colors)(rng);
    all.resize(k);
    std::sort(all.begin(), all.end());
    inst.lists[v] = all;
    auto& d = inst.defects[v];
    d.assign(k, 0);
    auto sum = [&]() {
      std::int64_t s = 0;
      for (auto x : d) s += factor * x + 1;
      return s;
    };
    std::uniform_int_distribution<int> pick(0, k - 1);
    while (sum() <= g.degree(v)) ++d[pick(rng)];
    if (std::bernoulli_distribution(0.3)(rng)) ++d[pick(rng)];
  }
  return inst;
}

}  // namespace testsupport
