#include "listdefect/linial.hpp"

#include <algorithm>

#include "listdefect/error.hpp"

namespace listdefect {

bool is_prime(std::int64_t x) {
  if (x < 2) return false;
  for (std::int64_t f = 2; f * f <= x; ++f)
    if (x % f == 0) return false;
  return true;
}

int ceil_log(std::int64_t q, std::int64_t p) {
  int t = 0;
  __int128 pw = 1;
  while (pw < p) {
    pw *= q;
    ++t;
  }
  return t;
}

LinialSchedule linial_schedule(std::int64_t palette, int degree) {
  LinialSchedule s;
  s.palette = palette;
  if (degree <= 0) {
    s.palette = std::min<std::int64_t>(palette, 1);
    return s;
  }
  if (degree == 1) {
    s.matching_round = palette > 2;
    s.palette = std::min<std::int64_t>(palette, 2);
    return s;
  }
  while (true) {
    std::int64_t chosen = 0;
    int chosen_deg = 0;
    for (std::int64_t q = 2; q * q < s.palette; ++q) {
      if (!is_prime(q)) continue;
      const int d = std::max(0, ceil_log(q, s.palette) - 1);
      if (q > static_cast<std::int64_t>(degree) * d) {
        chosen = q;
        chosen_deg = d;
        break;
      }
    }
    if (chosen == 0) break;
    s.steps.push_back({chosen, chosen_deg});
    s.palette = chosen * chosen;
  }
  return s;
}

LinialSchedule defective_linial_schedule(std::int64_t palette, int beta, std::int64_t d) {
  LinialSchedule s;
  if (d >= beta) {
    s.palette = 1;
    return s;
  }
  s = linial_schedule(palette, std::max(beta, 2));
  s.matching_round = false;
  std::int64_t defect = 0;
  while (true) {
    std::int64_t chosen = 0;
    int chosen_deg = 0;
    std::int64_t after = 0;
    for (std::int64_t q = 2; q * q < s.palette; ++q) {
      if (!is_prime(q)) continue;
      const int dp = std::max(0, ceil_log(q, s.palette) - 1);
      const std::int64_t bound = defect + (static_cast<std::int64_t>(beta) * dp) / q;
      if (bound <= d) {
        chosen = q;
        chosen_deg = dp;
        after = bound;
        break;
      }
    }
    if (chosen == 0) break;
    s.steps.push_back({chosen, chosen_deg, true, after});
    s.palette = chosen * chosen;
    defect = after;
  }
  return s;
}

namespace {

std::int64_t eval_poly(std::int64_t color, std::int64_t q, int degree, std::int64_t x) {
  // Coefficients are the base-q digits of color, lowest first; Horner from the top.
  std::vector<std::int64_t> coeff(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    coeff[j] = color % q;
    color /= q;
  }
  unsigned __int128 acc = 0;
  for (int j = degree; j >= 0; --j) acc = (acc * x + coeff[j]) % q;
  return static_cast<std::int64_t>(acc);
}

class LinialProgram : public NodeProgram {
 public:
  LinialProgram(const LinialSchedule& s, std::int64_t start_palette, bool oriented)
      : s_(s), palette_(start_palette), oriented_(oriented) {}

  void init(NodeContext& ctx) override {
    color_ = ctx.graph().init_color(ctx.id());
    if (ctx.neighbors().empty() && !s_.matching_round && s_.steps.empty()) {
      ctx.emit(s_.palette <= 1 ? 0 : color_);
      return;
    }
    if (s_.steps.empty() && !s_.matching_round) {
      ctx.emit(s_.palette <= 1 ? 0 : color_);
      return;
    }
    ctx.broadcast(Message().put(color_, bits::color_bits(palette_)));
  }

  void step(NodeContext& ctx) override {
    if (ctx.has_output()) return;
    const auto r = ctx.round();
    std::vector<std::int64_t> nb;
    for (const auto& env : ctx.inbox()) {
      if (oriented_) {
        auto edge = ctx.graph().edge_id(ctx.id(), env.from);
        const auto& e = ctx.graph().edges()[*edge];
        const bool out = ctx.graph().forward(*edge) == (e.u == ctx.id());
        if (!out) continue;
      }
      nb.push_back(MessageReader(env.msg).get());
    }
    if (s_.matching_round) {
      std::int64_t c = 0;
      for (auto u : nb)
        if (u < color_) c = 1;
      ctx.emit(c);
      return;
    }
    const auto& st = s_.steps[r - 1];
    std::int64_t best_x = -1;
    std::int64_t best_count = -1;
    for (std::int64_t x = 0; x < st.q; ++x) {
      const auto mine = eval_poly(color_, st.q, st.degree, x);
      std::int64_t agree = 0;
      for (auto u : nb) agree += eval_poly(u, st.q, st.degree, x) == mine;
      if (best_x < 0 || agree < best_count) {
        best_x = x;
        best_count = agree;
        if (agree == 0) break;
      }
    }
    if (!st.defective && best_count != 0) ctx.fail("no agreement-free evaluation point");
    if (st.defective && best_count > st.defect_after)
      ctx.fail("defective step exceeded its agreement bound");
    color_ = best_x * st.q + eval_poly(color_, st.q, st.degree, best_x);
    palette_ = st.q * st.q;
    if (r == s_.steps.size()) {
      ctx.emit(color_);
      return;
    }
    ctx.broadcast(Message().put(color_, bits::color_bits(palette_)));
  }

 private:
  const LinialSchedule& s_;
  std::int64_t palette_;
  bool oriented_;
  std::int64_t color_ = 0;
};

LinialRun run_schedule(const ColoredGraph& graph, const LinialSchedule& s, bool oriented,
                       const RunConfig& config) {
  LinialRun out;
  out.palette = s.palette;
  const auto m = graph.m();
  out.trace = run(
      graph, [&](int) { return std::make_unique<LinialProgram>(s, m, oriented); }, config);
  out.output.colors.assign(out.trace.outputs.begin(), out.trace.outputs.end());
  out.notes.push_back("palette=" + std::to_string(s.palette));
  out.notes.push_back("steps=" + std::to_string(s.steps.size()));
  return out;
}

}  // namespace

LinialRun linial_coloring(const ColoredGraph& graph, const RunConfig& config) {
  const auto s = linial_schedule(graph.m(), graph.max_degree());
  return run_schedule(graph, s, false, config);
}

LinialRun defective_linial(const ColoredGraph& graph, std::int64_t d, const RunConfig& config) {
  if (!graph.has_orientation())
    fail(ErrorCode::MissingOrientation, "defective_linial needs an orientation");
  if (d < 0) fail(ErrorCode::InvalidArgument, "negative defect");
  const auto s = defective_linial_schedule(graph.m(), graph.max_beta(), d);
  return run_schedule(graph, s, true, config);
}

}  // namespace listdefect
