#include "listdefect/oldc_main.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "listdefect/error.hpp"

namespace listdefect {

std::uint64_t ceil_pow4(std::uint64_t x) {
  std::uint64_t p = 1;
  while (p < x) {
    if (p > (std::numeric_limits<std::uint64_t>::max() >> 2))
      fail(ErrorCode::CapExceeded, "ceil_pow4 overflow");
    p <<= 2;
  }
  return p;
}

std::uint64_t h_prime_formula(std::uint64_t h) {
  const double l = std::log2(8.0 * static_cast<double>(std::max<std::uint64_t>(h, 1)));
  // 4^ceil(log4 l), computed on integers once l is bracketed.
  std::uint64_t p = 1;
  while (static_cast<double>(p) < l - 1e-9) p <<= 2;
  return p;
}

namespace {

enum Tag : std::int64_t { kType = 0, kDecided = 1, kChoice = 2 };
enum class Phase { Announce, Types, Choose, Decide };

struct NodeState {
  std::map<int, NodeType> types;   // out-neighbor types announced in Phase I
  std::map<int, ColorSet> chosen;  // out-neighbor C_u
  std::vector<Color> decided;      // colors of out-neighbors settled earlier
  ColorSet reduced;                // L′_v
  ColorSet own;                    // C_v
  std::int64_t color = kNoColor;
};

struct TwoShared {
  const ColoredGraph* graph;
  std::vector<ColorSet> lists;
  std::vector<std::int64_t> defects;
  std::vector<int> cls;  // -1 trivial
  std::vector<std::vector<bool>> out;
  std::vector<NodeState> state;
  std::vector<TypeTable> tables;  // per class, built between the two Phase I runs
  std::vector<std::int64_t> beta_same;  // β_{v,cls(v)}
  std::uint64_t tau;
  std::uint64_t tau_prime;
  std::uint64_t space;
  std::uint64_t lambda;
  // Diagnostics.
  std::vector<std::int64_t> bad, dmin, ignored, multiset, frequency, chosen_index;
};

std::uint64_t shifted(std::uint64_t base, int e) {
  if (e >= 63 || base > (std::numeric_limits<std::uint64_t>::max() >> e))
    fail(ErrorCode::CapExceeded, "2^i·τ overflows");
  return base << e;
}

class TwoPhaseProgram : public NodeProgram {
 public:
  TwoPhaseProgram(TwoShared& s, int v, Phase phase, int i) : s_(s), v_(v), phase_(phase), i_(i) {}

  void init(NodeContext& ctx) override {
    const bool mine = s_.cls[v_] == i_;
    switch (phase_) {
      case Phase::Announce:
        if (s_.cls[v_] < 0) {
          auto& st = s_.state[v_];
          st.color = s_.lists[v_].front();
          ctx.broadcast(Message().put(kDecided, bits::kTagBits).put(st.color, bits::color_bits(s_.space)));
        }
        break;
      case Phase::Types:
        if (mine) announce_type(ctx);
        break;
      case Phase::Choose:
        if (mine) choose(ctx);
        break;
      case Phase::Decide:
        if (mine) decide(ctx);
        break;
    }
  }

  void step(NodeContext& ctx) override {
    auto& st = s_.state[v_];
    const auto nb = ctx.neighbors();
    for (const auto& env : ctx.inbox()) {
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(nb.begin(), nb.end(), env.from) - nb.begin());
      if (!s_.out[v_][pos]) continue;
      MessageReader r(env.msg);
      const auto tag = r.get();
      if (tag == kDecided) {
        st.decided.push_back(r.get());
      } else if (tag == kType) {
        NodeType t;
        t.init_color = r.get();
        t.list = r.get_list();
        st.types[env.from] = std::move(t);
      } else if (tag == kChoice) {
        const auto idx = r.get();
        st.chosen[env.from] = s_.tables[i_].family(st.types.at(env.from))[idx];
      }
    }
    ctx.emit(0);
  }

 private:
  void announce_type(NodeContext& ctx) {
    auto& st = s_.state[v_];
    const auto d = s_.defects[v_];
    // Colors claimed by more than d/4 lower-class out-neighbors are dropped.
    std::map<Color, std::int64_t> count;
    std::int64_t lower_total = 0;
    for (const auto& [u, c] : st.chosen) {
      lower_total += static_cast<std::int64_t>(c.size());
      for (Color x : c) ++count[x];
    }
    st.reduced.clear();
    std::int64_t bad = 0;
    for (Color x : s_.lists[v_]) {
      auto it = count.find(x);
      if (it != count.end() && 4 * it->second > d)
        ++bad;
      else
        st.reduced.push_back(x);
    }
    s_.bad[v_] = bad;
    if (bad * (d + 1) > 4 * lower_total) ctx.fail("|B_v| exceeds 4D/(d+1)");
    const auto k = shifted(s_.tau, i_);
    if (st.reduced.size() < k)
      fail(ErrorCode::ListTooSmall, "node " + std::to_string(v_) + ": |L′|=" +
                                        std::to_string(st.reduced.size()) + " below k=" + std::to_string(k));
    ctx.broadcast(Message()
                      .put(kType, bits::kTagBits)
                      .put(s_.graph->init_color(v_), bits::init_color_bits(s_.graph->m()))
                      .put_list(st.reduced, bits::list_bits(s_.space, s_.lambda)));
  }

  void choose(NodeContext& ctx) {
    auto& st = s_.state[v_];
    const auto& table = s_.tables[i_];
    const auto& fam = table.family({s_.graph->init_color(v_), st.reduced, 0});
    std::vector<const Family*> peers;
    for (const auto& [u, t] : st.types)
      if (s_.cls[u] == i_) peers.push_back(&table.family(t));
    std::int64_t best = -1, best_d = 0;
    for (std::size_t t = 0; t < fam.size(); ++t) {
      std::int64_t dc = 0;
      for (const Family* pf : peers)
        for (const auto& c : *pf)
          if (tau_g_conflict(fam[t], c, s_.tau, 0)) {
            ++dc;
            break;
          }
      if (best < 0 || dc < best_d) {
        best = static_cast<std::int64_t>(t);
        best_d = dc;
      }
    }
    const double avg = static_cast<double>(peers.size()) * static_cast<double>(s_.tau_prime - 1) /
                       static_cast<double>(fam.size());
    if (static_cast<double>(best_d) > avg + 1e-9) ctx.fail("Phase I pigeonhole bound violated");
    if (4 * best_d > s_.defects[v_]) ctx.fail("Phase I choice exceeds d/4 conflicts");
    s_.dmin[v_] = best_d;
    s_.chosen_index[v_] = best;
    st.own = fam[best];
    ctx.broadcast(Message().put(kChoice, bits::kTagBits).put(best, bits::index_bits(fam.size())));
  }

  void decide(NodeContext& ctx) {
    auto& st = s_.state[v_];
    const auto d = s_.defects[v_];
    std::map<Color, std::int64_t> m;
    for (Color x : st.own) m[x] = 0;
    std::int64_t size = 0;
    for (Color y : st.decided) {
      auto it = m.find(y);
      if (it != m.end()) ++it->second, ++size;
    }
    std::int64_t ignored = 0;
    for (const auto& [u, c] : st.chosen) {
      if (s_.cls[u] != i_) continue;
      ColorSet common;
      std::set_intersection(c.begin(), c.end(), st.own.begin(), st.own.end(), std::back_inserter(common));
      if (common.size() >= s_.tau) {
        ++ignored;
        continue;
      }
      for (Color x : common) ++m[x], ++size;
    }
    s_.ignored[v_] = ignored;
    s_.multiset[v_] = size;
    if (4 * ignored > d) ctx.fail("ignored same-class neighbors exceed d/4");
    const auto cap = shifted(s_.tau, i_) * static_cast<std::uint64_t>(d + 1);
    if (2 * static_cast<std::uint64_t>(size) >= cap) ctx.fail("Phase II multiset reaches 2^i(d+1)τ/2");
    Color pick = kNoColor;
    std::int64_t pick_f = 0;
    for (const auto& [x, f] : m)
      if (pick == kNoColor || f < pick_f) pick = x, pick_f = f;
    if (2 * pick_f > d) ctx.fail("Phase II pick exceeds d/2");
    s_.frequency[v_] = pick_f;
    st.color = pick;
    ctx.broadcast(Message().put(kDecided, bits::kTagBits).put(pick, bits::color_bits(s_.space)));
  }

  TwoShared& s_;
  int v_;
  Phase phase_;
  int i_;
};

std::uint64_t list_space(const std::vector<ColorSet>& lists) {
  std::set<Color> all;
  for (const auto& l : lists) all.insert(l.begin(), l.end());
  return std::max<std::uint64_t>(all.size(), 1);
}

}  // namespace

TwoPhaseRun two_phase_oldc(const ColoredGraph& graph, const std::vector<ColorSet>& lists,
                           const std::vector<std::int64_t>& defects, const std::vector<int>& cls,
                           std::uint64_t q, const OldcParams& params) {
  const int n = graph.n();
  if (!graph.has_orientation())
    fail(ErrorCode::MissingOrientation, "two_phase_oldc needs an orientation");
  if (static_cast<int>(lists.size()) != n || static_cast<int>(defects.size()) != n ||
      static_cast<int>(cls.size()) != n)
    fail(ErrorCode::InvalidArgument, "lists/defects/classes size mismatch");
  if (q < 1) fail(ErrorCode::InvalidArgument, "q must be >= 1");

  auto shared = std::make_unique<TwoShared>();
  auto& s = *shared;
  s.graph = &graph;
  s.lists = lists;
  s.defects = defects;
  s.cls.assign(n, -1);
  s.space = params.color_space_size ? params.color_space_size : list_space(lists);
  s.lambda = 0;
  for (const auto& l : lists) s.lambda = std::max<std::uint64_t>(s.lambda, l.size());

  int top = 0;
  for (int v = 0; v < n; ++v) {
    if (lists[v].empty()) fail(ErrorCode::EmptyList, "node " + std::to_string(v) + " has no colors");
    if (defects[v] >= graph.beta(v)) continue;
    if (cls[v] < 0) fail(ErrorCode::InvalidArgument, "nontrivial node without a class");
    s.cls[v] = cls[v];
    top = std::max(top, cls[v]);
  }
  if (params.h_override) {
    if (*params.h_override < static_cast<std::uint64_t>(top))
      fail(ErrorCode::InvalidArgument, "h override below the largest class");
    top = static_cast<int>(*params.h_override);
  }
  const auto cp = make_conflict_params(std::max<std::uint64_t>(top, 1), s.space,
                                       static_cast<std::uint64_t>(graph.m()), 0, params.tau_override);
  s.tau = cp.tau;
  s.tau_prime = cp.tau_prime;

  s.out.resize(n);
  for (int v = 0; v < n; ++v) {
    s.out[v].resize(graph.degree(v));
    for (int p = 0; p < graph.degree(v); ++p) s.out[v][p] = graph.points_out(v, p);
  }

  // Hypothesis and list-size gate on β_{v,j}.
  const int logq = static_cast<int>(std::floor(std::log2(static_cast<double>(q)) + 1e-9));
  s.beta_same.assign(n, 0);
  double eff = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n; ++v) {
    if (s.cls[v] < 0) continue;
    const int i = s.cls[v];
    std::map<int, std::int64_t> per_class;
    for (int u : graph.out_neighbors(v))
      if (s.cls[u] >= 0) ++per_class[s.cls[u]];
    s.beta_same[v] = per_class[i];
    const double dp1 = static_cast<double>(defects[v] + 1);
    const double lhs = 4.0 * std::max(static_cast<double>(per_class[i]),
                                      static_cast<double>(graph.beta(v)) / static_cast<double>(q));
    if (lhs > std::ldexp(dp1, i) + 1e-9)
      fail(ErrorCode::ConditionViolated, "node " + std::to_string(v) +
                                             ": 4·max{β_vi, β/q}/(d+1) exceeds 2^i");
    double extra = 0;
    for (int j = std::max(0, i - logq); j < i; ++j)
      extra += static_cast<double>(per_class[j]) * std::ldexp(1.0, j);
    extra *= 4.0 / dp1;
    const double unit = std::ldexp(1.0, 2 * i);
    const double have = static_cast<double>(lists[v].size()) / static_cast<double>(s.tau);
    eff = std::min(eff, (have - extra) / unit);
    if (have < params.alpha * unit + extra)
      fail(ErrorCode::ListTooSmall, "node " + std::to_string(v) + ": |L|=" +
                                        std::to_string(lists[v].size()) +
                                        " below [α·4^i + 4/(d+1)·Σβ_vj·2^j]·τ");
  }

  s.state.assign(n, {});
  s.tables.assign(static_cast<std::size_t>(top) + 1, {});
  s.bad.assign(n, 0);
  s.dmin.assign(n, 0);
  s.ignored.assign(n, 0);
  s.multiset.assign(n, 0);
  s.frequency.assign(n, 0);
  s.chosen_index.assign(n, -1);

  RunConfig cfg = params.run;
  cfg.audit_bound = bits::kTagBits + bits::init_color_bits(graph.m()) +
                    bits::list_bits(s.space, s.lambda);
  const std::string base = cfg.label == "run" ? "oldc-two-phase" : cfg.label;

  TwoPhaseRun res;
  auto stage = [&](Phase phase, int i, const std::string& label) {
    cfg.label = base + ":" + label;
    auto t = run(graph, [&](int v) { return std::make_unique<TwoPhaseProgram>(s, v, phase, i); }, cfg);
    for (auto& r : t.per_round) r.phase = label;
    res.trace.append(t);
  };

  stage(Phase::Announce, -1, "announce");
  for (int i = 0; i <= top; ++i) {
    stage(Phase::Types, i, "p1-types-" + std::to_string(i));
    std::vector<NodeType> types;
    for (int v = 0; v < n; ++v)
      if (s.cls[v] == i) types.push_back({graph.init_color(v), s.state[v].reduced, 0});
    if (!types.empty()) {
      TableSpec spec;
      spec.k_by_class = {shifted(s.tau, i)};
      spec.kprime_by_class = {shifted(s.tau_prime, i)};
      spec.tau = s.tau;
      spec.tau_prime = s.tau_prime;
      spec.g = 0;
      spec.subset_cap = params.subset_cap;
      spec.step_cap = params.step_cap;
      s.tables[i] = params.use_cache ? build_type_table_cached(types, spec) : build_type_table(types, spec);
      res.table_types += s.tables[i].types.size();
    }
    stage(Phase::Choose, i, "p1-choose-" + std::to_string(i));
  }
  for (int i = top; i >= 0; --i) stage(Phase::Decide, i, "p2-decide-" + std::to_string(i));

  res.output.colors.resize(n);
  res.chosen.resize(n);
  for (int v = 0; v < n; ++v) {
    res.output.colors[v] = s.state[v].color;
    res.chosen[v] = s.state[v].own;
  }
  res.trace.outputs.assign(res.output.colors.begin(), res.output.colors.end());
  res.h = static_cast<std::uint64_t>(top);
  res.tau = s.tau;
  res.tau_prime = s.tau_prime;
  res.effective_alpha = std::isinf(eff) ? 0.0 : eff;
  res.cls = s.cls;
  res.frequency = s.frequency;
  res.p1_conflicts = s.dmin;
  res.bad_colors = s.bad;
  res.ignored = s.ignored;
  res.multiset = s.multiset;
  std::ostringstream note;
  note << "two-phase classes=0.." << top << " q=" << q << " tau=" << s.tau << " tau'=" << s.tau_prime
       << " effective_alpha=" << res.effective_alpha;
  res.notes.push_back(note.str());
  return res;
}

LambdaProfile lambda_profile(const std::vector<std::uint64_t>& energy, std::uint64_t h,
                             std::uint64_t sqrt_r) {
  LambdaProfile p;
  p.energy = energy;
  for (auto e : energy) p.total += e;
  p.r.assign(energy.size(), kZeroLambda);
  if (p.total == 0) return p;
  const long double total = static_cast<long double>(p.total);
  for (std::size_t mu = 0; mu < energy.size(); ++mu) {
    const long double e = static_cast<long double>(energy[mu]);
    if (e == 0 || 2.0L * static_cast<long double>(h) * e < total) continue;
    int r = 0;
    while (e * std::ldexp(1.0L, 2 * r) < total) ++r;
    p.r[mu] = r;
  }
  auto delta_for = [&](int r) {
    return static_cast<std::int64_t>(r >= 64 ? 0 : (sqrt_r >> r));
  };
  int best = -1;
  for (std::size_t mu = 0; mu < energy.size(); ++mu)
    if (p.r[mu] != kZeroLambda && p.r[mu] <= 1 && (best < 0 || p.r[mu] < p.r[best]))
      best = static_cast<int>(mu);
  if (best >= 0) {
    p.case_two = true;
    p.classes = {{best, best}};
    p.delta = {static_cast<std::int64_t>(sqrt_r / 4)};
    p.kept_lambda = std::ldexp(1.0, -2 * p.r[best]);
    return p;
  }
  std::set<int> used;
  for (std::size_t mu = 0; mu < energy.size(); ++mu) {
    if (p.r[mu] == kZeroLambda) continue;
    const int f = static_cast<int>(mu) - p.r[mu] + 2;
    if (f < 1 || !used.insert(f).second) continue;
    p.classes.push_back({f, static_cast<int>(mu)});
    p.delta.push_back(delta_for(p.r[mu]));
    p.kept_lambda += std::ldexp(1.0, -2 * p.r[mu]);
  }
  return p;
}

MainRun main_oldc(const ColoredGraph& graph, const LdcInstance& inst, const MainParams& params) {
  const int n = graph.n();
  if (!graph.has_orientation())
    fail(ErrorCode::MissingOrientation, "main_oldc needs an orientation");
  if (inst.g != 0) fail(ErrorCode::InvalidArgument, "main_oldc solves g = 0 instances");
  const std::uint64_t space = params.color_space_size
                                  ? params.color_space_size
                                  : std::max<std::uint64_t>(inst.color_space.size(), 1);
  const std::uint64_t m = static_cast<std::uint64_t>(graph.m());
  const std::uint64_t beta_hat_max = static_cast<std::uint64_t>(ceil_pow2(graph.max_beta()));
  const std::uint64_t h = params.h_override
                              ? *params.h_override
                              : std::max<std::uint64_t>(1, bits::ceil_log2(beta_hat_max));
  const std::uint64_t hp = params.hprime_override ? *params.hprime_override : h_prime_formula(h);
  const std::uint64_t alpha = ceil_pow4(static_cast<std::uint64_t>(std::ceil(std::max(params.alpha, 1.0))));

  std::uint64_t tau, tau_prime, tau_bar, tau_bar_prime;
  if (params.tau_override) {
    std::tie(tau, tau_prime) = *params.tau_override;
  } else {
    tau = ceil_pow4(tau_formula(h, space, m));
    tau_prime = tau_prime_formula(tau, h);
  }
  if (params.taubar_override) {
    tau_bar = ceil_pow4(params.taubar_override->first);
    tau_bar_prime = params.taubar_override->second;
  } else {
    tau_bar = ceil_pow4(tau_formula(hp, h + 1, m));
    tau_bar_prime = tau_prime_formula(tau_bar, hp);
  }

  MainRun res;
  res.h_prime = hp;
  res.tau_bar = tau_bar;
  res.case_two.assign(n, -1);

  std::vector<ColorSet> lists2(n);
  std::vector<std::int64_t> defects2(n);
  std::vector<int> nontrivial;
  // Per nontrivial node: color lists bucketed by μ, with their rounded defect.
  std::vector<std::map<int, std::pair<ColorSet, std::int64_t>>> by_mu(n);
  std::vector<LambdaProfile> profiles(n);
  double eff = std::numeric_limits<double>::infinity();
  int class_top = 0;

  for (int v = 0; v < n; ++v) {
    const auto& l = inst.lists[v];
    if (l.empty()) fail(ErrorCode::EmptyList, "node " + std::to_string(v) + " has no colors");
    const std::int64_t beta = graph.beta(v);
    std::size_t trivial = l.size();
    for (std::size_t i = 0; i < l.size() && trivial == l.size(); ++i)
      if (inst.defects[v][i] >= beta) trivial = i;
    if (trivial < l.size()) {
      lists2[v] = {l[trivial]};
      defects2[v] = inst.defects[v][trivial];
      continue;
    }
    nontrivial.push_back(v);
    const std::uint64_t bh = static_cast<std::uint64_t>(ceil_pow2(beta));
    // √R = √α·β̂·√τ̄·h′, all powers of two except possibly h′.
    const unsigned __int128 sqrt_r = static_cast<unsigned __int128>(std::llround(std::sqrt(alpha))) * bh *
                                     static_cast<std::uint64_t>(std::llround(std::sqrt(tau_bar))) * hp;
    if (sqrt_r > (std::uint64_t{1} << 62)) fail(ErrorCode::CapExceeded, "√R overflows");
    const auto sr = static_cast<std::uint64_t>(sqrt_r);
    std::vector<std::uint64_t> energy;
    long double total = 0;
    for (std::size_t i = 0; i < l.size(); ++i) {
      const auto dp1 = static_cast<std::uint64_t>(floor_pow2(inst.defects[v][i] + 1));
      // μ = log4(R/(d+1)²) = log2(√R/(d+1)); √R/(d+1) is a power of two when h′ is.
      const int mu = static_cast<int>(std::floor(std::log2(static_cast<double>(sr) / static_cast<double>(dp1)) + 1e-9));
      if (energy.size() <= static_cast<std::size_t>(mu)) energy.resize(mu + 1, 0);
      energy[mu] += dp1 * dp1;
      total += static_cast<long double>(dp1 * dp1);
      auto& slot = by_mu[v][mu];
      slot.first.push_back(l[i]);
      slot.second = static_cast<std::int64_t>(dp1) - 1;
    }
    const long double need = static_cast<long double>(bh) * bh * tau * tau_bar * hp * hp;
    eff = std::min(eff, static_cast<double>(std::sqrt(total / need)));
    if (total < static_cast<long double>(alpha) * alpha * need)
      fail(ErrorCode::ListTooSmall, "node " + std::to_string(v) +
                                        ": Σ(d+1)² below α²β̂²ττ̄h′²");
    profiles[v] = lambda_profile(energy, h, sr);
    auto& pr = profiles[v];
    if (!pr.case_two && pr.kept_lambda < 0.05 - 1e-12)
      fail(ErrorCode::InvariantViolation, "node " + std::to_string(v) + ": kept λ sum " +
                                              std::to_string(pr.kept_lambda) + " below 1/20");
    if (pr.classes.empty()) fail(ErrorCode::InvariantViolation, "node " + std::to_string(v) + " kept no class");
    res.case_two[v] = pr.case_two ? 1 : 0;
    for (const auto& c : pr.classes) class_top = std::max(class_top, c.first);
  }
  res.effective_alpha = std::isinf(eff) ? 0.0 : eff;

  const std::uint64_t q = params.q_override ? *params.q_override : h;
  MainParams inner = params;
  inner.run.label = "run";
  inner.h_override.reset();

  // Stage 1 over class values on the nontrivial subgraph.
  std::vector<int> cls(n, -1);
  bool forced = true;
  for (int v : nontrivial) forced = forced && profiles[v].classes.size() == 1;
  if (forced) {
    // Singleton class lists leave nothing to choose.
    for (int v : nontrivial) cls[v] = profiles[v].classes.front().first;
    if (!nontrivial.empty()) res.notes.push_back("stage1 skipped: every class list is a singleton");
  } else {
    const ColoredGraph sub = graph.induced(nontrivial);
    LdcInstance st1;
    st1.flavor = Flavor::Oriented;
    st1.g = static_cast<std::int64_t>(std::floor(std::log2(static_cast<double>(h)) + 1e-9));
    for (int c = 0; c <= class_top; ++c) st1.color_space.push_back(c);
    std::int64_t min_delta = std::numeric_limits<std::int64_t>::max();
    for (int v : nontrivial) {
      const auto& pr = profiles[v];
      std::vector<std::pair<int, std::int64_t>> pairs;
      for (std::size_t k = 0; k < pr.classes.size(); ++k) pairs.push_back({pr.classes[k].first, pr.delta[k]});
      std::sort(pairs.begin(), pairs.end());
      ColorSet l;
      std::vector<std::int64_t> d;
      for (auto [c, dl] : pairs) {
        l.push_back(c);
        d.push_back(dl);
        min_delta = std::min(min_delta, dl);
      }
      st1.lists.push_back(std::move(l));
      st1.defects.push_back(std::move(d));
    }
    // Stage-1 SimpleOLDC class depth: h′ unless a rounded δ needs more.
    std::uint64_t h1 = hp;
    for (int u = 0; u < sub.n(); ++u)
      h1 = std::max<std::uint64_t>(h1, single_defect_class(sub.beta(u), floor_pow2(min_delta + 1) - 1));
    OldcParams p1 = inner;
    p1.alpha = static_cast<double>(alpha) * static_cast<double>(hp * hp) /
               (20.0 * static_cast<double>(h1) * static_cast<double>(2 * st1.g + 1));
    p1.tau_override = std::make_pair(tau_bar, tau_bar_prime);
    p1.h_override = h1;
    p1.color_space_size = static_cast<std::uint64_t>(class_top) + 1;
    p1.run.label = "main:stage1";
    auto r1 = multi_defect_oldc(sub, st1, p1);
    res.stage1_rounds = r1.trace.rounds_elapsed;
    for (auto& r : r1.trace.per_round) r.phase = "stage1";
    res.trace.append(r1.trace);
    for (auto& note : r1.notes) res.notes.push_back("stage1 " + note);
    for (std::size_t k = 0; k < nontrivial.size(); ++k) cls[nontrivial[k]] = static_cast<int>(r1.output.colors[k]);
  }

  // Stage 2 on the chosen μ-bucket.
  for (int v : nontrivial) {
    const auto& pr = profiles[v];
    int mu = -1;
    for (const auto& c : pr.classes)
      if (c.first == cls[v]) mu = c.second;
    if (mu < 0) fail(ErrorCode::InvariantViolation, "stage 1 returned a class outside the list");
    lists2[v] = by_mu[v][mu].first;
    defects2[v] = by_mu[v][mu].second;
  }
  for (int v : nontrivial) {
    std::int64_t same = 0;
    for (int u : graph.out_neighbors(v))
      if (cls[u] == cls[v]) ++same;
    const double lhs = 4.0 * std::max(static_cast<double>(same),
                                      static_cast<double>(graph.beta(v)) / static_cast<double>(q));
    if (lhs > std::ldexp(static_cast<double>(defects2[v] + 1), cls[v]) + 1e-9)
      fail(ErrorCode::InvariantViolation, "node " + std::to_string(v) +
                                              ": stage 2 hypothesis fails after stage 1");
  }
  OldcParams p2 = inner;
  p2.alpha = static_cast<double>(alpha) / 16.0;
  p2.tau_override = std::make_pair(tau, tau_prime);
  p2.color_space_size = space;
  p2.run.label = "main:stage2";
  auto r2 = two_phase_oldc(graph, lists2, defects2, cls, q, p2);
  res.trace.append(r2.trace);
  res.trace.outputs = r2.trace.outputs;
  res.output = r2.output;
  res.h = h;
  res.tau = r2.tau;
  res.tau_prime = r2.tau_prime;
  res.cls = cls;
  res.chosen = r2.chosen;
  res.frequency = r2.frequency;
  res.p1_conflicts = r2.p1_conflicts;
  res.bad_colors = r2.bad_colors;
  res.ignored = r2.ignored;
  res.multiset = r2.multiset;
  res.table_types = r2.table_types;
  std::ostringstream note;
  note << "main h=" << h << " h'=" << hp << " alpha=" << alpha << " tau=" << tau << " taubar=" << tau_bar
       << " q=" << q << " effective_alpha=" << res.effective_alpha;
  res.notes.insert(res.notes.begin(), note.str());
  for (auto& nt : r2.notes) res.notes.push_back("stage2 " + nt);
  return res;
}

}  // namespace listdefect
