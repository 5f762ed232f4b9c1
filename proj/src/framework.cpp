#include "listdefect/framework.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "listdefect/error.hpp"
#include "listdefect/linial.hpp"
#include "listdefect/seq_oracle.hpp"

namespace listdefect {

ArbdefRun arbdefective_subroutine(const ColoredGraph& graph, std::int64_t q, std::int64_t delta,
                                  ArbdefMode mode, const RunConfig& run) {
  if (q < 1 || delta < 0) fail(ErrorCode::InvalidArgument, "need q >= 1 and δ >= 0");
  if (q * (delta + 1) <= graph.max_degree())
    fail(ErrorCode::ConditionViolated, "q·(δ+1) must exceed Δ");
  if (mode == ArbdefMode::Auto)
    mode = graph.has_orientation() ? ArbdefMode::DefectiveLinial : ArbdefMode::Sequential;
  ArbdefRun res;
  if (mode == ArbdefMode::DefectiveLinial) {
    RunConfig cfg = run;
    cfg.label = "arbdefective:linial";
    auto r = defective_linial(graph, delta, cfg);
    res.output = orientation_from_graph(graph, r.output.colors);
    res.trace = std::move(r.trace);
    res.classes = r.palette;
    res.route = "defective-linial";
    return res;
  }
  LdcInstance inst;
  inst.flavor = Flavor::Arbdefective;
  for (std::int64_t c = 0; c < q; ++c) inst.color_space.push_back(c);
  inst.lists.assign(graph.n(), inst.color_space);
  inst.defects.assign(graph.n(), std::vector<std::int64_t>(q, delta));
  auto r = sequential_arbdefective(graph, inst);
  res.output = std::move(r.output);
  res.trace.outputs.assign(res.output.colors.begin(), res.output.colors.end());
  res.classes = q;
  res.route = "sequential";
  return res;
}

std::string FrameworkRun::stages_csv() const {
  std::ostringstream out;
  out << "stage,class,colored_count,max_uncolored_degree,rounds,max_bits\n";
  for (const auto& r : stages)
    out << r.stage << ',' << r.cls << ',' << r.colored << ',' << r.max_uncolored_degree << ','
        << r.rounds << ',' << r.max_bits << '\n';
  return out.str();
}

namespace {

int ceil_log2_int(int x) {
  int k = 0;
  while ((1 << k) < x) ++k;
  return k;
}

}  // namespace

FrameworkRun degree_halving_framework(const ColoredGraph& graph, const LdcInstance& inst,
                                      const InnerSolver& inner, const FrameworkParams& params) {
  const int n = graph.n();
  const auto& edges = graph.edges();
  for (int v = 0; v < n; ++v) {
    std::int64_t sum = 0;
    for (auto d : inst.defects[v]) sum += d + 1;
    if (sum <= graph.degree(v))
      fail(ErrorCode::ConditionViolated, "node " + std::to_string(v) + ": Σ(d+1) <= deg");
  }

  std::vector<bool> colored(n, false);
  std::vector<Color> color(n, kNoColor);
  std::vector<std::map<Color, std::int64_t>> a(n);  // colored neighbors per color
  std::vector<std::int8_t> orient(graph.edge_count(), 0);
  // Working lists shrink between stages; defects stay the original ones.
  std::vector<std::vector<Color>> wl = inst.lists;
  std::vector<std::vector<std::int64_t>> wd = inst.defects;

  auto uncolored_degree = [&](int v) {
    int c = 0;
    for (int u : graph.neighbors(v)) c += !colored[u];
    return c;
  };
  auto residual = [&](int v, std::vector<Color>& l, std::vector<std::int64_t>& d) {
    l.clear();
    d.clear();
    for (std::size_t j = 0; j < wl[v].size(); ++j) {
      auto it = a[v].find(wl[v][j]);
      const std::int64_t used = it == a[v].end() ? 0 : it->second;
      if (used <= wd[v][j]) {
        l.push_back(wl[v][j]);
        d.push_back(wd[v][j] - used);
      }
    }
  };
  auto set_dir = [&](int tail, int head) {
    const auto e = *graph.edge_id(tail, head);
    orient[e] = edges[e].u == tail ? 1 : -1;
  };
  auto monitor = [&]() {
    for (int v = 0; v < n; ++v) {
      if (!colored[v]) continue;
      std::int64_t out = 0;
      const auto inc = graph.incident_edges(v);
      const auto nb = graph.neighbors(v);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const int u = nb[i];
        if (!colored[u] || color[u] != color[v]) continue;
        const auto e = inc[i];
        if ((orient[e] == 1 && edges[e].u == v) || (orient[e] == -1 && edges[e].v == v)) ++out;
      }
      if (out > inst.defect(v, color[v]))
        fail(ErrorCode::InvariantViolation, "colored node " + std::to_string(v) + " exceeds its defect");
    }
  };

  FrameworkRun res;
  const int delta0 = graph.max_degree();
  const int stage_cap = ceil_log2_int(delta0) + 1;
  const std::string base = params.run.label == "run" ? "framework" : params.run.label;
  const double nu = inner.nu;
  const double kappa = std::max(inner.kappa, 1.0);

  for (int stage = 1;; ++stage) {
    std::vector<int> U;
    for (int v = 0; v < n; ++v)
      if (!colored[v]) U.push_back(v);
    if (U.empty()) break;
    if (stage > stage_cap)
      fail(ErrorCode::InvariantViolation, "stage count exceeds ⌈log2 Δ⌉ + 1");
    res.stage_count = stage;
    const ColoredGraph bar = graph.induced(U);
    const int ds = bar.max_degree();
    std::size_t lambda = 1;
    for (int v : U) lambda = std::max(lambda, wl[v].size());
    const double spread = std::pow(static_cast<double>(lambda), nu / (1 + nu)) * std::pow(kappa, 1 / (1 + nu));
    std::int64_t delta = static_cast<std::int64_t>(std::floor(ds / (2.0 * spread)));
    delta = std::min<std::int64_t>(delta, ds / 4);
    const std::int64_t q = std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(spread - 1e-9)),
                                                  ds / (delta + 1) + 1);

    RunConfig acfg = params.run;
    auto arb = arbdefective_subroutine(bar, q, delta, params.arbdef, acfg);
    res.trace.append(arb.trace);
    std::vector<int> arb_color(n, -1);
    std::vector<std::int8_t> arb_dir(graph.edge_count(), 0);  // in terms of the full graph's edges
    for (int i = 0; i < bar.n(); ++i) arb_color[U[i]] = static_cast<int>(arb.output.colors[i]);
    for (std::size_t e = 0; e < bar.edge_count(); ++e) {
      const int u = U[bar.edges()[e].u], v = U[bar.edges()[e].v];
      const bool fwd = arb.output.orientation[e] == 1;
      const auto ge = *graph.edge_id(u, v);
      const int tail = fwd ? u : v;
      arb_dir[ge] = edges[ge].u == tail ? 1 : -1;
    }
    res.notes.push_back("stage " + std::to_string(stage) + ": Δ_s=" + std::to_string(ds) + " q=" +
                        std::to_string(q) + " δ=" + std::to_string(delta) + " route=" + arb.route +
                        " classes=" + std::to_string(arb.classes));

    for (std::int64_t c = 0; c < arb.classes; ++c) {
      std::vector<int> part;
      for (int v : U) {
        if (colored[v] || arb_color[v] != c) continue;
        const int unc = uncolored_degree(v);
        if (2 * unc >= ds || unc == 0) part.push_back(v);
      }
      std::size_t rounds = 0;
      std::uint64_t bits = 0;
      if (!part.empty()) {
        ColoredGraph sub = graph.induced(part);
        std::vector<std::pair<int, int>> arcs;
        for (const auto& e : sub.edges()) {
          const int u = part[e.u], v = part[e.v];
          const auto ge = *graph.edge_id(u, v);
          const int tail = arb_dir[ge] == 1 ? edges[ge].u : edges[ge].v;
          arcs.push_back(tail == u ? std::pair(e.u, e.v) : std::pair(e.v, e.u));
        }
        sub.set_orientation(arcs);
        LdcInstance li;
        li.flavor = Flavor::Oriented;
        li.color_space = inst.color_space;
        li.lists.resize(part.size());
        li.defects.resize(part.size());
        for (std::size_t i = 0; i < part.size(); ++i) {
          const int v = part[i];
          residual(v, li.lists[i], li.defects[i]);
          const int unc = uncolored_degree(v);
          if (ds > 0 && 2 * unc >= ds) {
            // Hölder chain: Σ(d′+1)^{1+ν} >= (Δ_s/2)^{1+ν}/Λ^ν >= δ^{1+ν}·κ.
            double s = 0;
            for (auto d : li.defects[i]) s += std::pow(static_cast<double>(d + 1), 1 + nu);
            const double need = std::pow(static_cast<double>(delta), 1 + nu) * kappa;
            if (s + 1e-9 < need)
              fail(ErrorCode::InvariantViolation, "residual energy below δ^{1+ν}κ at node " + std::to_string(v));
          }
        }
        AlgorithmRun r;
        bool ok = false;
        RunConfig cfg = params.run;
        cfg.label = base + ":s" + std::to_string(stage) + "c" + std::to_string(c);
        try {
          r = inner.solve(sub, li, cfg);
          if (!validate_ldc(sub, li, r.output).valid)
            fail(ErrorCode::InvariantViolation, "inner solver output failed validation");
          ok = true;
          ++res.inner_successes;
        } catch (const BudgetViolation&) {
          throw;
        } catch (const Error& e) {
          if (!params.sequential_fallback || !is_fail_fast(e.code()) ||
              e.code() == ErrorCode::InvariantViolation)
            throw;
          res.notes.push_back("stage " + std::to_string(stage) + " class " + std::to_string(c) +
                              ": inner " + to_string(e.code()) + ", sequential fallback");
        }
        if (!ok) {
          LdcInstance def = li;
          def.flavor = Flavor::Defective;
          r = sequential_inner().solve(sub, def, cfg);
          ++res.fallbacks;
        }
        rounds = r.trace.rounds_elapsed;
        bits = r.trace.max_message_bits();
        res.trace.append(r.trace);
        for (std::size_t i = 0; i < part.size(); ++i) {
          const int v = part[i];
          color[v] = r.output.colors[i];
        }
        // New-to-old orientation; inside the class the arbdefective orientation stands.
        for (std::size_t i = 0; i < part.size(); ++i) {
          const int v = part[i];
          for (int u : graph.neighbors(v))
            if (colored[u]) set_dir(v, u);
        }
        for (const auto& e : sub.edges()) {
          const int u = part[e.u], v = part[e.v];
          const auto ge = *graph.edge_id(u, v);
          orient[ge] = arb_dir[ge];
        }
        for (int v : part) {
          colored[v] = true;
          for (int u : graph.neighbors(v)) ++a[u][color[v]];
        }
        monitor();
      }
      int maxdeg = 0;
      for (int v : U)
        if (!colored[v]) maxdeg = std::max(maxdeg, uncolored_degree(v));
      res.stages.push_back({stage, static_cast<int>(c), part.size(), maxdeg, rounds, bits});
    }

    // Residual instance on the uncolored part; lists shrink to deg+1 colors.
    int maxdeg = 0;
    for (int v : U) {
      if (colored[v]) continue;
      const int unc = uncolored_degree(v);
      maxdeg = std::max(maxdeg, unc);
      std::vector<Color> l;
      std::vector<std::int64_t> d;
      residual(v, l, d);
      if (l.size() > static_cast<std::size_t>(unc) + 1) {
        l.resize(unc + 1);
        d.resize(unc + 1);
      }
      std::int64_t sum = 0;
      for (auto x : d) sum += x + 1;
      if (sum <= unc)
        fail(ErrorCode::InvariantViolation, "residual condition lost at node " + std::to_string(v));
      // Keep the original defects for the surviving colors; a_v is re-applied on use.
      std::vector<std::int64_t> orig;
      for (Color x : l) orig.push_back(inst.defect(v, x));
      wl[v] = std::move(l);
      wd[v] = std::move(orig);
    }
    if ((static_cast<std::int64_t>(maxdeg) << stage) > delta0)
      fail(ErrorCode::InvariantViolation, "uncolored degree did not halve in stage " + std::to_string(stage));
  }

  res.output.colors = color;
  res.output.orientation = orient;
  res.trace.outputs.assign(color.begin(), color.end());
  LdcInstance check = inst;
  check.flavor = Flavor::Arbdefective;
  if (!validate_ldc(graph, check, res.output).valid)
    fail(ErrorCode::InvariantViolation, "framework output failed validation");
  std::ostringstream note;
  note << "framework stages=" << res.stage_count << " inner=" << inner.name << " successes="
       << res.inner_successes << " fallbacks=" << res.fallbacks;
  res.notes.insert(res.notes.begin(), note.str());
  return res;
}

FrameworkRun congest_pipeline(const ColoredGraph& graph, const LdcInstance& inst,
                              const PipelineParams& params) {
  RunConfig lcfg = params.framework.run;
  lcfg.label = "pipeline:linial";
  auto lin = linial_coloring(graph, lcfg);
  ColoredGraph g = graph;
  g.clear_orientation();
  g.set_init_colors(lin.output.colors, std::max<std::int64_t>(lin.palette, 1));

  const std::uint64_t space = std::max<std::size_t>(inst.color_space.size(), 2);
  const int delta = std::max(graph.max_degree(), 2);
  const int exponent = std::max(
      1, static_cast<int>(std::ceil(std::log(static_cast<double>(space)) / std::log(static_cast<double>(delta)) - 1e-9)));
  const int r = params.r ? *params.r : 2 * exponent;
  const InnerSolver base = main_oldc_inner(params.inner, params.kappa);
  const int depth = reduction_depth(space, preset_message_p(space, r));

  InnerSolver reduced;
  reduced.name = "space-reduced(" + base.name + ",r=" + std::to_string(r) + ")";
  reduced.nu = base.nu;
  reduced.kappa = std::pow(base.kappa, depth);
  reduced.solve = [base, r](const ColoredGraph& sub, const LdcInstance& li, const RunConfig& cfg) {
    return static_cast<AlgorithmRun>(preset_message(sub, li, r, base, cfg));
  };

  FrameworkParams fp = params.framework;
  if (fp.run.label == "run") fp.run.label = "pipeline";
  auto res = degree_halving_framework(g, inst, reduced, fp);
  RoundTrace trace = lin.trace;
  trace.append(res.trace);
  trace.outputs = res.trace.outputs;
  res.trace = std::move(trace);
  res.notes.insert(res.notes.begin(), "linial palette=" + std::to_string(lin.palette) + " rounds=" +
                                          std::to_string(lin.trace.rounds_elapsed) + " r=" + std::to_string(r));
  return res;
}

}  // namespace listdefect
