#include "listdefect/oldc_basic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "listdefect/error.hpp"

namespace listdefect {

int single_defect_class(std::int64_t beta, std::int64_t d) {
  int i = 0;
  while ((std::int64_t{1} << i) * (d + 1) < 2 * beta) ++i;
  return i;
}

std::int64_t floor_pow2(std::int64_t x) {
  if (x < 1) fail(ErrorCode::InvalidArgument, "floor_pow2 needs x >= 1");
  return std::int64_t{1} << (63 - std::countl_zero(static_cast<std::uint64_t>(x)));
}

std::int64_t ceil_pow2(std::int64_t x) {
  if (x <= 1) return 1;
  return std::int64_t{1} << bits::ceil_log2(static_cast<std::uint64_t>(x));
}

std::size_t pick_energy_class(const std::vector<std::uint64_t>& energies) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < energies.size(); ++i)
    if (energies[i] > energies[best]) best = i;
  return best;
}

namespace {

enum Tag : std::int64_t { kDescriptor = 0, kDecided = 1, kChoice = 2 };

struct SingleShared {
  const ColoredGraph* graph;
  const TypeTable* table;
  std::vector<ColorSet> restricted;
  std::vector<std::int64_t> defects;
  std::vector<int> cls;  // -1 trivial
  std::vector<std::vector<bool>> out;  // out[v][pos] for adjacency position pos
  std::uint64_t h;
  std::uint64_t tau;
  std::uint64_t tau_prime;
  std::uint64_t kprime;
  std::int64_t g;
  std::uint64_t space;
  std::uint64_t lambda;
  std::int64_t beta_hat;
  // Diagnostics written by each node at its own index.
  std::vector<std::int64_t> chosen_index;
  std::vector<std::int64_t> frequency;
};

class SingleDefectProgram : public NodeProgram {
 public:
  SingleDefectProgram(SingleShared& s, int v) : s_(s), v_(v) {}

  void init(NodeContext& ctx) override {
    const auto& g = *s_.graph;
    if (s_.cls[v_] < 0) {
      const Color x = s_.restricted[v_].front();
      ctx.emit(x);
      ctx.broadcast(Message().put(kDecided, bits::kTagBits).put(x, bits::color_bits(s_.space)));
      return;
    }
    Message m;
    m.put(kDescriptor, bits::kTagBits)
        .put(g.init_color(v_), bits::init_color_bits(g.m()))
        .put(s_.cls[v_], bits::pow2_defect_bits(s_.beta_hat))
        .put_list(s_.restricted[v_], bits::list_bits(s_.space, s_.lambda));
    ctx.broadcast(m);
    family_ = &s_.table->family(NodeType{g.init_color(v_), s_.restricted[v_], s_.cls[v_]});
  }

  void step(NodeContext& ctx) override {
    if (ctx.has_output()) return;
    const auto nb = ctx.neighbors();
    for (const auto& env : ctx.inbox()) {
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(nb.begin(), nb.end(), env.from) - nb.begin());
      if (!s_.out[v_][pos]) continue;
      MessageReader r(env.msg);
      const auto tag = r.get();
      if (tag == kDecided) {
        decided_.push_back(r.get());
      } else if (tag == kDescriptor) {
        NodeType t;
        t.init_color = r.get();
        t.cls = static_cast<int>(r.get());
        t.list = r.get_list();
        if (t.cls <= s_.cls[v_]) low_.push_back({env.from, &s_.table->family(t), {}});
      } else if (tag == kChoice) {
        const auto idx = r.get();
        for (auto& n : low_)
          if (n.id == env.from) n.chosen = (*n.family)[idx];
      }
    }
    const auto round = ctx.round();
    if (round == 1) {
      choose_set(ctx);
      return;
    }
    if (round == 2 + (s_.h - static_cast<std::uint64_t>(s_.cls[v_]))) decide(ctx);
  }

 private:
  struct LowNeighbor {
    int id;
    const Family* family;
    ColorSet chosen;
  };

  void choose_set(NodeContext& ctx) {
    const auto& fam = *family_;
    std::int64_t best = -1;
    std::int64_t best_d = 0;
    for (std::size_t t = 0; t < fam.size(); ++t) {
      std::int64_t d = 0;
      for (const auto& n : low_) {
        for (const auto& c : *n.family) {
          if (tau_g_conflict(fam[t], c, s_.tau, s_.g)) {
            ++d;
            break;
          }
        }
      }
      if (best < 0 || d < best_d) {
        best = static_cast<std::int64_t>(t);
        best_d = d;
      }
    }
    const double beta = static_cast<double>(s_.graph->beta(v_));
    const double avg = beta * static_cast<double>(s_.tau_prime - 1) / static_cast<double>(s_.kprime);
    if (static_cast<double>(best_d) > avg + 1e-9)
      ctx.fail("P1 pigeonhole bound violated: " + std::to_string(best_d) + " > " +
               std::to_string(avg));
    if (2 * best_d >= s_.defects[v_] + 1) ctx.fail("P1 choice has >= (d+1)/2 conflicts");
    chosen_ = fam[best];
    s_.chosen_index[v_] = best;
    ctx.broadcast(Message().put(kChoice, bits::kTagBits).put(best, bits::index_bits(s_.kprime)));
  }

  void decide(NodeContext& ctx) {
    Color pick = kNoColor;
    std::int64_t pick_f = 0;
    for (Color x : chosen_) {
      std::int64_t f = 0;
      for (const auto& n : low_) f += static_cast<std::int64_t>(mu_g(x, n.chosen, s_.g));
      for (Color y : decided_) f += (x - y <= s_.g && y - x <= s_.g);
      if (pick == kNoColor || f < pick_f) {
        pick = x;
        pick_f = f;
      }
    }
    s_.frequency[v_] = pick_f;
    if (pick_f > s_.defects[v_])
      ctx.fail("frequency " + std::to_string(pick_f) + " exceeds defect " +
               std::to_string(s_.defects[v_]));
    ctx.emit(pick);
    ctx.broadcast(Message().put(kDecided, bits::kTagBits).put(pick, bits::color_bits(s_.space)));
  }

  SingleShared& s_;
  int v_;
  const Family* family_ = nullptr;
  std::vector<LowNeighbor> low_;
  std::vector<Color> decided_;
  ColorSet chosen_;
};

std::uint64_t distinct_colors(const std::vector<ColorSet>& lists) {
  std::set<Color> all;
  for (const auto& l : lists) all.insert(l.begin(), l.end());
  return std::max<std::uint64_t>(all.size(), 1);
}

std::uint64_t checked_shift(std::uint64_t base, std::uint64_t e) {
  if (e >= 63 || base > (std::numeric_limits<std::uint64_t>::max() >> e))
    fail(ErrorCode::CapExceeded, "family size 2^h·τ′ overflows");
  return base << e;
}

}  // namespace

OldcRun single_defect_oldc(const ColoredGraph& graph, const std::vector<ColorSet>& lists,
                           const std::vector<std::int64_t>& defects, std::int64_t g,
                           const OldcParams& params) {
  const int n = graph.n();
  if (!graph.has_orientation())
    fail(ErrorCode::MissingOrientation, "single_defect_oldc needs an orientation");
  if (static_cast<int>(lists.size()) != n || static_cast<int>(defects.size()) != n)
    fail(ErrorCode::InvalidArgument, "lists/defects size mismatch");
  auto shared = std::make_unique<SingleShared>();
  auto& s = *shared;
  s.graph = &graph;
  s.g = g;
  s.space = params.color_space_size ? params.color_space_size : distinct_colors(lists);
  s.lambda = 0;
  for (const auto& l : lists) s.lambda = std::max<std::uint64_t>(s.lambda, l.size());
  s.defects = defects;
  s.cls.assign(n, -1);
  s.restricted.resize(n);
  s.chosen_index.assign(n, -1);
  s.frequency.assign(n, 0);
  s.beta_hat = ceil_pow2(graph.max_beta());

  OldcRun res;
  int max_cls = 0;
  for (int v = 0; v < n; ++v) {
    if (lists[v].empty()) fail(ErrorCode::EmptyList, "node " + std::to_string(v) + " has no colors");
    if (defects[v] < 0) fail(ErrorCode::InvalidArgument, "negative defect");
    if (defects[v] >= graph.beta(v)) continue;
    s.cls[v] = single_defect_class(graph.beta(v), defects[v]);
    max_cls = std::max(max_cls, s.cls[v]);
  }
  s.h = bits::ceil_log2(2 * static_cast<std::uint64_t>(s.beta_hat));
  if (params.h_override) {
    if (*params.h_override < static_cast<std::uint64_t>(max_cls))
      fail(ErrorCode::InvalidArgument, "h override below the largest γ-class");
    s.h = *params.h_override;
  }
  s.h = std::max<std::uint64_t>(s.h, static_cast<std::uint64_t>(max_cls));
  const auto cp = make_conflict_params(std::max<std::uint64_t>(s.h, 1), s.space,
                                       static_cast<std::uint64_t>(graph.m()), g,
                                       params.tau_override);
  s.tau = cp.tau;
  s.tau_prime = cp.tau_prime;
  s.kprime = checked_shift(s.tau_prime, s.h);
  res.h = s.h;
  res.tau = s.tau;
  res.tau_prime = s.tau_prime;

  double eff = std::numeric_limits<double>::infinity();
  std::vector<NodeType> types;
  for (int v = 0; v < n; ++v) {
    if (s.cls[v] < 0) {
      s.restricted[v] = lists[v];
      continue;
    }
    const double ratio = static_cast<double>(graph.beta(v)) / static_cast<double>(defects[v] + 1);
    const double need_unit = ratio * ratio * static_cast<double>(s.tau) * static_cast<double>(2 * g + 1);
    const double have = static_cast<double>(lists[v].size());
    eff = std::min(eff, have / need_unit);
    if (have < params.alpha * need_unit)
      fail(ErrorCode::ListTooSmall, "node " + std::to_string(v) + ": |L|=" +
                                        std::to_string(lists[v].size()) + " below α(β/(d+1))²τ(2g+1)=" +
                                        std::to_string(params.alpha * need_unit));
    auto r = residue_restrict(lists[v], g);
    const auto k = checked_shift(s.tau, static_cast<std::uint64_t>(s.cls[v]));
    if (r.list.size() < k)
      fail(ErrorCode::ListTooSmall, "node " + std::to_string(v) + ": restricted list of size " +
                                        std::to_string(r.list.size()) + " below k=" + std::to_string(k));
    s.restricted[v] = std::move(r.list);
    types.push_back({graph.init_color(v), s.restricted[v], s.cls[v]});
  }
  res.effective_alpha = std::isinf(eff) ? 0.0 : eff;

  TableSpec spec;
  for (std::uint64_t i = 0; i <= s.h; ++i) {
    spec.k_by_class.push_back(checked_shift(s.tau, i));
    spec.kprime_by_class.push_back(s.kprime);
  }
  spec.tau = s.tau;
  spec.tau_prime = s.tau_prime;
  spec.g = g;
  spec.subset_cap = params.subset_cap;
  spec.step_cap = params.step_cap;
  const TypeTable table = params.use_cache ? build_type_table_cached(types, spec)
                                           : build_type_table(types, spec);
  s.table = &table;
  res.table_types = table.types.size();

  s.out.resize(n);
  for (int v = 0; v < n; ++v) {
    s.out[v].resize(graph.degree(v));
    for (int p = 0; p < graph.degree(v); ++p) s.out[v][p] = graph.points_out(v, p);
  }

  RunConfig cfg = params.run;
  cfg.audit_bound = bits::kTagBits + bits::init_color_bits(graph.m()) +
                    bits::pow2_defect_bits(s.beta_hat) + bits::list_bits(s.space, s.lambda);
  if (cfg.label == "run") cfg.label = "oldc-single";
  res.trace = run(graph, [&](int v) { return std::make_unique<SingleDefectProgram>(s, v); }, cfg);
  res.output.colors.assign(res.trace.outputs.begin(), res.trace.outputs.end());

  // Post-hoc P1 audit: conflicting lower/equal-class out-neighbors stay at most d/2.
  res.cls = s.cls;
  res.frequency = s.frequency;
  res.chosen.resize(n);
  res.p1_conflicts.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    if (s.cls[v] < 0) continue;
    const auto& fam = table.family({graph.init_color(v), s.restricted[v], s.cls[v]});
    res.chosen[v] = fam[s.chosen_index[v]];
  }
  for (int v = 0; v < n; ++v) {
    if (s.cls[v] < 0) continue;
    for (int u : graph.out_neighbors(v)) {
      if (s.cls[u] < 0 || s.cls[u] > s.cls[v]) continue;
      if (tau_g_conflict(res.chosen[v], res.chosen[u], s.tau, g)) ++res.p1_conflicts[v];
    }
    if (2 * res.p1_conflicts[v] > defects[v])
      fail(ErrorCode::InvariantViolation, "P1 audit failed at node " + std::to_string(v));
  }
  std::ostringstream note;
  note << "h=" << s.h << " tau=" << s.tau << " tau'=" << s.tau_prime << " k'=" << s.kprime
       << " types=" << table.types.size() << " effective_alpha=" << res.effective_alpha;
  res.notes.push_back(note.str());
  return res;
}

OldcRun multi_defect_oldc(const ColoredGraph& graph, const LdcInstance& inst,
                          const OldcParams& params) {
  const int n = graph.n();
  if (!graph.has_orientation())
    fail(ErrorCode::MissingOrientation, "multi_defect_oldc needs an orientation");
  OldcParams p = params;
  if (p.color_space_size == 0) p.color_space_size = std::max<std::size_t>(inst.color_space.size(), 1);
  const std::int64_t beta_hat_max = ceil_pow2(graph.max_beta());
  const std::uint64_t h = p.h_override ? *p.h_override
                                       : bits::ceil_log2(2 * static_cast<std::uint64_t>(beta_hat_max));
  const auto cp = make_conflict_params(std::max<std::uint64_t>(h, 1), p.color_space_size,
                                       static_cast<std::uint64_t>(graph.m()), inst.g, p.tau_override);

  std::vector<ColorSet> lists(n);
  std::vector<std::int64_t> defects(n);
  double eff = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n; ++v) {
    const auto& l = inst.lists[v];
    if (l.empty()) fail(ErrorCode::EmptyList, "node " + std::to_string(v) + " has no colors");
    const std::int64_t beta = graph.beta(v);
    // A color whose defect covers the whole out-degree settles the node at once.
    std::size_t trivial = l.size();
    for (std::size_t i = 0; i < l.size() && trivial == l.size(); ++i)
      if (inst.defects[v][i] >= beta) trivial = i;
    if (trivial < l.size()) {
      lists[v] = {l[trivial]};
      defects[v] = inst.defects[v][trivial];
      continue;
    }
    const std::int64_t beta_hat = ceil_pow2(beta);
    const int classes = static_cast<int>(bits::ceil_log2(static_cast<std::uint64_t>(beta_hat))) + 1;
    std::vector<std::uint64_t> energy(classes, 0);
    std::vector<ColorSet> by_class(classes);
    std::vector<std::int64_t> class_defect(classes, 0);
    double total = 0;
    for (std::size_t i = 0; i < l.size(); ++i) {
      const std::int64_t dp1 = floor_pow2(inst.defects[v][i] + 1);
      const int c = static_cast<int>(bits::ceil_log2(static_cast<std::uint64_t>(beta_hat / dp1)));
      by_class[c].push_back(l[i]);
      class_defect[c] = dp1 - 1;
      energy[c] += static_cast<std::uint64_t>(dp1 * dp1);
      total += static_cast<double>(dp1 * dp1);
    }
    const double need = static_cast<double>(beta_hat * beta_hat) * static_cast<double>(cp.tau) *
                        static_cast<double>(h) * static_cast<double>(2 * inst.g + 1);
    eff = std::min(eff, total / need);
    if (total < p.alpha * need)
      fail(ErrorCode::ListTooSmall, "node " + std::to_string(v) + ": Σ(d+1)² = " +
                                        std::to_string(static_cast<std::uint64_t>(total)) +
                                        " below αβ²τh(2g+1) = " + std::to_string(p.alpha * need));
    const auto best = pick_energy_class(energy);
    lists[v] = by_class[best];
    defects[v] = class_defect[best];
  }
  p.h_override = std::max<std::uint64_t>(h, 1);
  auto res = single_defect_oldc(graph, lists, defects, inst.g, p);
  res.effective_alpha = std::isinf(eff) ? 0.0 : eff;
  res.notes.push_back("multi-defect effective_alpha=" + std::to_string(res.effective_alpha) +
                      " (defects rounded to 2^j - 1, β to 2^j)");
  return res;
}

}  // namespace listdefect
