#include "listdefect/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "listdefect/error.hpp"
#include "listdefect/oldc_basic.hpp"
#include "listdefect/sim.hpp"

namespace listdefect {

GraphFamily parse_family(const std::string& name) {
  if (name == "ring") return GraphFamily::Ring;
  if (name == "clique") return GraphFamily::Clique;
  if (name == "random-gnp") return GraphFamily::RandomGnp;
  if (name == "random-dag") return GraphFamily::RandomDag;
  if (name == "power-law") return GraphFamily::PowerLaw;
  fail(ErrorCode::InvalidArgument, "unknown family '" + name + "'");
}

ListModel parse_list_model(const std::string& name) {
  if (name == "degree-plus-one") return ListModel::DegreePlusOne;
  if (name == "uniform-k") return ListModel::UniformK;
  if (name == "defect-budget") return ListModel::DefectBudget;
  fail(ErrorCode::InvalidArgument, "unknown list model '" + name + "'");
}

Target parse_target(const std::string& name) {
  if (name == "ldc") return Target::Ldc;
  if (name == "arb") return Target::Arb;
  if (name == "simple-oldc") return Target::SimpleOldc;
  if (name == "main-oldc") return Target::MainOldc;
  fail(ErrorCode::InvalidArgument, "unknown target '" + name + "'");
}

namespace {

using Rng = std::mt19937_64;

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

std::vector<std::pair<int, int>> make_edges(const GenerateParams& p, Rng& rng) {
  const int n = p.n;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> deg(n, 0);
  auto add = [&](int u, int v) {
    edges.emplace_back(std::min(u, v), std::max(u, v));
    ++deg[u];
    ++deg[v];
  };
  switch (p.family) {
    case GraphFamily::Ring:
      if (n < 3) fail(ErrorCode::InfeasibleParams, "ring needs n >= 3");
      for (int v = 0; v < n; ++v) add(v, (v + 1) % n);
      break;
    case GraphFamily::Clique:
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) add(u, v);
      break;
    case GraphFamily::RandomGnp:
    case GraphFamily::RandomDag: {
      if (p.delta < 0) fail(ErrorCode::InfeasibleParams, "Δ must be >= 0");
      const double prob = n > 1 ? std::min(1.0, static_cast<double>(p.delta) / (n - 1)) : 0.0;
      std::bernoulli_distribution coin(prob);
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (coin(rng) && deg[u] < p.delta && deg[v] < p.delta) add(u, v);
      break;
    }
    case GraphFamily::PowerLaw: {
      if (p.delta < 1) fail(ErrorCode::InfeasibleParams, "power-law needs Δ >= 1");
      // Preferential attachment with two links per arrival, capped at Δ.
      for (int v = 1; v < n; ++v) {
        for (int link = 0; link < 2; ++link) {
          std::uint64_t total = 0;
          for (int u = 0; u < v; ++u)
            if (deg[u] < p.delta) total += static_cast<std::uint64_t>(deg[u]) + 1;
          if (total == 0 || deg[v] >= p.delta) break;
          std::uint64_t pick = uniform(rng, 0, total - 1);
          for (int u = 0; u < v; ++u) {
            if (deg[u] >= p.delta) continue;
            const auto w = static_cast<std::uint64_t>(deg[u]) + 1;
            if (pick < w) {
              const bool dup = std::find(edges.begin(), edges.end(), std::pair(u, v)) != edges.end();
              if (!dup) add(u, v);
              break;
            }
            pick -= w;
          }
        }
      }
      break;
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Color> sample_colors(Rng& rng, std::uint64_t space, std::size_t k) {
  std::vector<Color> all(space);
  std::iota(all.begin(), all.end(), Color{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[uniform(rng, i, space - 1)]);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

double oldc_energy(const std::vector<std::int64_t>& d) {
  double s = 0;
  for (auto x : d) {
    const double r = static_cast<double>(floor_pow2(x + 1));
    s += r * r;
  }
  return s;
}

}  // namespace

Instance generate_instance(const GenerateParams& p) {
  if (p.n < 1) fail(ErrorCode::InfeasibleParams, "n must be >= 1");
  if (p.k < 1 && p.lists != ListModel::DegreePlusOne) fail(ErrorCode::InfeasibleParams, "k must be >= 1");
  Rng rng(p.seed);
  const auto edges = make_edges(p, rng);
  Instance out;
  out.graph = ColoredGraph(p.n, edges);
  auto& g = out.graph;

  std::vector<std::int64_t> init(p.n, -1);
  std::int64_t m = 1;
  for (int v = 0; v < p.n; ++v) {
    std::vector<bool> used(g.degree(v) + 1, false);
    for (int u : g.neighbors(v))
      if (init[u] >= 0 && init[u] <= g.degree(v)) used[init[u]] = true;
    std::int64_t c = 0;
    while (used[c]) ++c;
    init[v] = c;
    m = std::max(m, c + 1);
  }
  g.set_init_colors(init, m);

  if (p.family == GraphFamily::RandomDag) {
    std::vector<int> rank(p.n);
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);
    std::vector<std::pair<int, int>> arcs;
    for (const auto& e : g.edges())
      arcs.push_back(rank[e.u] < rank[e.v] ? std::pair(e.u, e.v) : std::pair(e.v, e.u));
    g.set_orientation(arcs);
  } else {
    g.orient_by_id();
  }

  const int delta = g.max_degree();
  auto& inst = out.inst;
  std::uint64_t space = p.color_space;
  if (space == 0)
    space = p.lists == ListModel::DegreePlusOne ? static_cast<std::uint64_t>(delta) + 1
                                                : std::max<std::uint64_t>(p.k, static_cast<std::uint64_t>(delta) + 1);
  for (std::uint64_t c = 0; c < space; ++c) inst.color_space.push_back(static_cast<Color>(c));
  inst.g = p.g;
  inst.lists.resize(p.n);
  inst.defects.resize(p.n);

  for (int v = 0; v < p.n; ++v) {
    const int deg = g.degree(v);
    const std::size_t k = p.lists == ListModel::DegreePlusOne ? static_cast<std::size_t>(deg) + 1
                                                              : static_cast<std::size_t>(p.k);
    if (k > space)
      fail(ErrorCode::InfeasibleParams, "list size " + std::to_string(k) + " exceeds color space " +
                                            std::to_string(space));
    inst.lists[v] = sample_colors(rng, space, k);
    auto& d = inst.defects[v];
    d.assign(k, 0);
    if (p.lists != ListModel::DefectBudget) continue;

    const std::int64_t beta = g.beta(v);
    const std::int64_t cap = p.target == Target::Ldc || p.target == Target::Arb ? deg : beta;
    auto holds = [&]() {
      std::int64_t s = 0;
      switch (p.target) {
        case Target::Ldc:
          for (auto x : d) s += x + 1;
          return s > deg;
        case Target::Arb:
          for (auto x : d) s += 2 * x + 1;
          return s > deg;
        case Target::SimpleOldc: {
          // The gate's h comes from the largest β̂ in the graph.
          const double bh = static_cast<double>(ceil_pow2(beta));
          const double h = static_cast<double>(bits::ceil_log2(2 * static_cast<std::uint64_t>(ceil_pow2(g.max_beta()))));
          return oldc_energy(d) >= p.alpha * bh * bh * static_cast<double>(p.tau) * std::max(h, 1.0) *
                                       static_cast<double>(2 * p.g + 1);
        }
        case Target::MainOldc: {
          const double bh = static_cast<double>(ceil_pow2(beta));
          const double hp = static_cast<double>(p.h_prime);
          return oldc_energy(d) >= p.alpha * p.alpha * bh * bh * static_cast<double>(p.tau) *
                                       static_cast<double>(p.tau_bar) * hp * hp;
        }
      }
      return false;
    };
    auto trivial = [&]() {
      for (auto x : d)
        if (x >= cap) return true;
      return false;
    };
    const bool oldc = p.target == Target::SimpleOldc || p.target == Target::MainOldc;
    while (!holds() && !trivial()) {
      auto& x = d[uniform(rng, 0, k - 1)];
      // OLDC energies only move when d+1 crosses a power of two.
      x = oldc ? std::min<std::int64_t>(2 * (x + 1) - 1, cap) : x + 1;
    }
    for (int s = 0; s < p.slack; ++s) {
      auto& x = d[uniform(rng, 0, k - 1)];
      if (x < cap) ++x;
    }
  }

  if (p.flavor) {
    inst.flavor = *p.flavor;
  } else if (p.lists == ListModel::DefectBudget) {
    inst.flavor = p.target == Target::Arb ? Flavor::Arbdefective
                  : p.target == Target::Ldc ? Flavor::Defective
                                            : Flavor::Oriented;
  } else {
    inst.flavor = Flavor::Defective;
  }
  inst.validate(p.n);
  return out;
}

}  // namespace listdefect
