#include "listdefect/space_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "listdefect/error.hpp"
#include "listdefect/seq_oracle.hpp"

namespace listdefect {

namespace {

AlgorithmRun slice(const AlgorithmRun& r) { return r; }

}  // namespace

InnerSolver main_oldc_inner(const MainParams& params, double kappa) {
  InnerSolver s;
  s.name = "main-oldc";
  s.nu = 1.0;
  s.kappa = kappa;
  s.solve = [params](const ColoredGraph& g, const LdcInstance& inst, const RunConfig& cfg) {
    MainParams p = params;
    p.run = cfg;
    p.color_space_size = 0;
    return slice(main_oldc(g, inst, p));
  };
  return s;
}

InnerSolver multi_defect_inner(const OldcParams& params, double kappa) {
  InnerSolver s;
  s.name = "oldc-basic";
  s.nu = 1.0;
  s.kappa = kappa;
  s.solve = [params](const ColoredGraph& g, const LdcInstance& inst, const RunConfig& cfg) {
    OldcParams p = params;
    p.run = cfg;
    p.color_space_size = 0;
    return slice(multi_defect_oldc(g, inst, p));
  };
  return s;
}

InnerSolver sequential_inner() {
  InnerSolver s;
  s.name = "seq";
  s.nu = 0.0;
  s.kappa = 1.0;
  s.solve = [](const ColoredGraph& g, const LdcInstance& inst, const RunConfig&) {
    AlgorithmRun r;
    auto res = sequential_ldc(g, inst);
    r.output = std::move(res.output);
    r.trace.outputs.assign(r.output.colors.begin(), r.output.colors.end());
    r.notes.push_back("sequential recolorings=" + std::to_string(res.recolorings));
    return r;
  };
  return s;
}

int reduction_depth(std::uint64_t space_size, std::uint64_t p) {
  if (p < 2) fail(ErrorCode::InvalidArgument, "p must be >= 2");
  int k = 1;
  unsigned __int128 pk = p;
  while (pk < space_size) {
    pk *= p;
    ++k;
  }
  return k;
}

std::uint64_t preset_message_p(std::uint64_t space_size, int r) {
  if (r < 1) fail(ErrorCode::InvalidArgument, "r must be >= 1");
  std::uint64_t p = 1;
  for (;;) {
    unsigned __int128 pr = 1;
    for (int i = 0; i < r && pr < space_size; ++i) pr *= p;
    if (pr >= space_size) return std::max<std::uint64_t>(p, 2);
    ++p;
  }
}

std::uint64_t preset_time_p(std::uint64_t beta, double kappa) {
  const double lb = std::log2(static_cast<double>(std::max<std::uint64_t>(beta, 2)));
  const double lk = std::log2(std::max(kappa, 2.0));
  const int e = static_cast<int>(std::ceil(std::sqrt(lb * lk) - 1e-9));
  return std::uint64_t{1} << std::clamp(e, 1, 62);
}

std::int64_t subspace_defect(double energy, double kappa, int levels, double nu) {
  const double scaled = energy / std::pow(kappa, levels - 1);
  return static_cast<std::int64_t>(std::floor(std::pow(scaled, 1.0 / (1.0 + nu)) + 1e-9));
}

SpaceReducedRun space_reduced_oldc(const ColoredGraph& graph, const LdcInstance& inst,
                                   std::uint64_t p, const InnerSolver& inner, const RunConfig& run) {
  const int n = graph.n();
  if (!graph.has_orientation())
    fail(ErrorCode::MissingOrientation, "space_reduced_oldc needs an orientation");
  if (inst.g != 0) fail(ErrorCode::InvalidArgument, "space reduction handles g = 0");
  std::vector<Color> space = inst.color_space;
  if (space.empty()) {
    std::set<Color> all;
    for (const auto& l : inst.lists) all.insert(l.begin(), l.end());
    space.assign(all.begin(), all.end());
  }
  const std::uint64_t size = std::max<std::size_t>(space.size(), 1);
  const int k = reduction_depth(size, p);
  auto pos_of = [&](Color x) {
    return static_cast<std::uint64_t>(std::lower_bound(space.begin(), space.end(), x) - space.begin());
  };
  std::uint64_t len = 1;
  for (int i = 0; i < k; ++i) len *= p;

  SpaceReducedRun res;
  res.p = p;
  res.depth = k;
  std::vector<std::uint64_t> lo(n, 0);
  const std::string base = run.label == "run" ? "space-reduced" : run.label;

  auto level_graph = [&]() {
    std::vector<bool> keep(graph.edge_count());
    for (std::size_t e = 0; e < graph.edge_count(); ++e)
      keep[e] = lo[graph.edges()[e].u] == lo[graph.edges()[e].v];
    return graph.edge_subgraph(keep);
  };

  for (int level = 0; level + 1 < k; ++level) {
    const std::uint64_t chunk = len / p;
    const int remaining = k - level;
    const ColoredGraph g = level_graph();
    LdcInstance sub;
    sub.flavor = Flavor::Oriented;
    sub.g = 0;
    for (std::uint64_t i = 0; i < p; ++i) sub.color_space.push_back(static_cast<Color>(i));
    sub.lists.resize(n);
    sub.defects.resize(n);
    double min_sum = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
      std::vector<double> energy(p, 0.0);
      const auto& l = inst.lists[v];
      for (std::size_t j = 0; j < l.size(); ++j) {
        const auto pos = pos_of(l[j]);
        if (pos < lo[v] || pos >= lo[v] + len) continue;
        energy[(pos - lo[v]) / chunk] += std::pow(static_cast<double>(inst.defects[v][j] + 1), 1.0 + inner.nu);
      }
      const double beta = static_cast<double>(g.beta(v));
      const double denom = std::pow(beta, 1.0 + inner.nu) * std::pow(inner.kappa, remaining);
      double lambda_sum = 0;
      for (std::uint64_t i = 0; i < p; ++i) {
        if (energy[i] == 0) continue;  // empty subspaces are never offered
        lambda_sum += energy[i] / denom;
        sub.lists[v].push_back(static_cast<Color>(i));
        sub.defects[v].push_back(subspace_defect(energy[i], inner.kappa, remaining, inner.nu));
      }
      min_sum = std::min(min_sum, lambda_sum);
      if (sub.lists[v].empty()) fail(ErrorCode::EmptyList, "node " + std::to_string(v) + " has no colors left");
      if (lambda_sum < 1.0 - 1e-9)
        fail(ErrorCode::ConditionViolated, "node " + std::to_string(v) + " level " + std::to_string(level) +
                                               ": Σλ = " + std::to_string(lambda_sum) + " < 1");
    }
    res.min_lambda_sum.push_back(min_sum);
    RunConfig cfg = run;
    cfg.label = base + ":level" + std::to_string(level);
    auto r = inner.solve(g, sub, cfg);
    if (!validate_ldc(g, sub, r.output).valid)
      fail(ErrorCode::InvariantViolation, "inner solver returned an invalid subspace choice");
    std::vector<int> chosen(n);
    for (int v = 0; v < n; ++v) {
      chosen[v] = static_cast<int>(r.output.colors[v]);
      lo[v] += static_cast<std::uint64_t>(chosen[v]) * chunk;
    }
    res.path.push_back(std::move(chosen));
    res.level_max_bits.push_back(r.trace.max_message_bits());
    res.trace.append(r.trace);
    for (auto& note : r.notes) res.notes.push_back("level " + std::to_string(level) + " " + note);
    len = chunk;
  }

  // Final level on the real colors, relabelled as offsets inside each node's subspace.
  const ColoredGraph g = level_graph();
  LdcInstance last;
  last.flavor = Flavor::Oriented;
  last.g = 0;
  for (std::uint64_t i = 0; i < len; ++i) last.color_space.push_back(static_cast<Color>(i));
  last.lists.resize(n);
  last.defects.resize(n);
  for (int v = 0; v < n; ++v) {
    const auto& l = inst.lists[v];
    for (std::size_t j = 0; j < l.size(); ++j) {
      const auto pos = pos_of(l[j]);
      if (pos < lo[v] || pos >= lo[v] + len) continue;
      last.lists[v].push_back(static_cast<Color>(pos - lo[v]));
      last.defects[v].push_back(inst.defects[v][j]);
    }
    if (last.lists[v].empty()) fail(ErrorCode::EmptyList, "node " + std::to_string(v) + " has no colors left");
  }
  RunConfig cfg = run;
  cfg.label = base + ":level" + std::to_string(k - 1);
  auto r = inner.solve(g, last, cfg);
  res.level_max_bits.push_back(r.trace.max_message_bits());
  res.trace.append(r.trace);
  for (auto& note : r.notes) res.notes.push_back("level " + std::to_string(k - 1) + " " + note);
  res.output.colors.resize(n);
  std::vector<int> final_chunk(n);
  for (int v = 0; v < n; ++v) {
    const auto off = static_cast<std::uint64_t>(r.output.colors[v]);
    if (off >= len || lo[v] + off >= space.size())
      fail(ErrorCode::InvariantViolation, "final color outside the chosen subspace");
    res.output.colors[v] = space[lo[v] + off];
    final_chunk[v] = static_cast<int>(off);
  }
  res.path.push_back(std::move(final_chunk));
  // Disjoint subspaces: the color's digit sequence must replay the chosen chunks.
  for (int v = 0; v < n; ++v) {
    std::uint64_t pos = pos_of(res.output.colors[v]);
    std::uint64_t unit = 1;
    for (int i = 1; i < k; ++i) unit *= p;
    for (int level = 0; level + 1 < k; ++level) {
      if (static_cast<int>((pos / unit) % p) != res.path[level][v])
        fail(ErrorCode::InvariantViolation, "subspace path mismatch at node " + std::to_string(v));
      unit /= p;
    }
  }
  res.trace.outputs.assign(res.output.colors.begin(), res.output.colors.end());
  std::ostringstream note;
  note << "space reduction p=" << p << " k=" << k << " inner=" << inner.name << " nu=" << inner.nu
       << " kappa=" << inner.kappa;
  res.notes.insert(res.notes.begin(), note.str());
  return res;
}

SpaceReducedRun preset_message(const ColoredGraph& graph, const LdcInstance& inst, int r,
                               const InnerSolver& inner, const RunConfig& run) {
  const std::uint64_t size = std::max<std::size_t>(inst.color_space.size(), 1);
  return space_reduced_oldc(graph, inst, preset_message_p(size, r), inner, run);
}

SpaceReducedRun preset_time(const ColoredGraph& graph, const LdcInstance& inst,
                            const InnerSolver& inner, const RunConfig& run) {
  return space_reduced_oldc(graph, inst,
                            preset_time_p(static_cast<std::uint64_t>(graph.max_beta()), inner.kappa),
                            inner, run);
}

}  // namespace listdefect
