#include "listdefect/seq_oracle.hpp"

#include <algorithm>
#include <functional>

#include "listdefect/error.hpp"

namespace listdefect {

namespace {

int same_count(const ColoredGraph& graph, const std::vector<Color>& colors, int v, Color x) {
  int c = 0;
  for (int u : graph.neighbors(v)) c += colors[u] == x;
  return c;
}

std::int64_t capped(std::int64_t d, int deg) { return std::min<std::int64_t>(d, deg); }

}  // namespace

std::int64_t ldc_potential(const ColoredGraph& graph, const LdcInstance& inst,
                           const std::vector<Color>& colors) {
  std::int64_t phi = 0;
  for (const auto& e : graph.edges()) phi += colors[e.u] == colors[e.v];
  for (int v = 0; v < graph.n(); ++v)
    phi += graph.degree(v) - capped(inst.defect(v, colors[v]), graph.degree(v));
  return phi;
}

SeqResult sequential_ldc(const ColoredGraph& graph, const LdcInstance& inst) {
  const int n = graph.n();
  if (inst.g != 0) fail(ErrorCode::InvalidArgument, "sequential_ldc supports g = 0 only");
  for (int v = 0; v < n; ++v) {
    std::int64_t sum = 0;
    for (auto d : inst.defects[v]) sum += d + 1;
    if (sum <= graph.degree(v))
      fail(ErrorCode::ConditionViolated,
           "node " + std::to_string(v) + ": sum of (d+1) is " + std::to_string(sum) +
               ", degree " + std::to_string(graph.degree(v)));
  }
  SeqResult res;
  auto& colors = res.output.colors;
  colors.resize(n);
  for (int v = 0; v < n; ++v) colors[v] = inst.lists[v].front();
  std::int64_t phi = ldc_potential(graph, inst, colors);
  res.potentials.push_back(phi);
  const std::uint64_t limit = 3 * graph.edge_count();
  while (true) {
    int unhappy = -1;
    for (int v = 0; v < n && unhappy < 0; ++v)
      if (same_count(graph, colors, v, colors[v]) > inst.defect(v, colors[v])) unhappy = v;
    if (unhappy < 0) break;
    const int v = unhappy;
    const int deg = graph.degree(v);
    const Color old = colors[v];
    const int same_old = same_count(graph, colors, v, old);
    Color pick = kNoColor;
    int same_new = 0;
    for (std::size_t i = 0; i < inst.lists[v].size(); ++i) {
      const Color y = inst.lists[v][i];
      const int s = same_count(graph, colors, v, y);
      if (s <= inst.defects[v][i]) {
        pick = y;
        same_new = s;
        break;
      }
    }
    if (pick == kNoColor) fail(ErrorCode::InvariantViolation, "unhappy node without a free color");
    colors[v] = pick;
    const std::int64_t next = phi + same_new - same_old + capped(inst.defect(v, old), deg) -
                              capped(inst.defect(v, pick), deg);
    if (next >= phi) fail(ErrorCode::InvariantViolation, "potential did not decrease");
    if (next != ldc_potential(graph, inst, colors))
      fail(ErrorCode::InvariantViolation, "incremental potential diverged");
    phi = next;
    res.potentials.push_back(phi);
    if (++res.recolorings > limit)
      fail(ErrorCode::InvariantViolation, "recoloring count exceeded 3|E|");
  }
  res.output.orientation.assign(graph.edge_count(), 0);
  return res;
}

SeqResult sequential_arbdefective(const ColoredGraph& graph, const LdcInstance& inst) {
  const int n = graph.n();
  for (int v = 0; v < n; ++v) {
    std::int64_t sum = 0;
    for (auto d : inst.defects[v]) sum += 2 * d + 1;
    if (sum <= graph.degree(v))
      fail(ErrorCode::ConditionViolated,
           "node " + std::to_string(v) + ": sum of (2d+1) is " + std::to_string(sum) +
               ", degree " + std::to_string(graph.degree(v)));
  }
  LdcInstance doubled = inst;
  doubled.flavor = Flavor::Defective;
  for (auto& dv : doubled.defects)
    for (auto& d : dv) d *= 2;
  SeqResult res = sequential_ldc(graph, doubled);
  const auto& colors = res.output.colors;
  auto& orient = res.output.orientation;
  orient.assign(graph.edge_count(), 1);

  // Per color class: monochromatic edges plus virtual edges pairing odd-degree nodes.
  struct Arc {
    int to;
    int id;  // real edge id, or -1 for a virtual edge
  };
  std::vector<Color> classes(colors.begin(), colors.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  for (Color x : classes) {
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, slot)
    std::vector<int> slot_edge;
    std::vector<std::pair<int, int>> slot_ends;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      const auto& ed = graph.edges()[e];
      if (colors[ed.u] != x || colors[ed.v] != x) continue;
      const int s = static_cast<int>(slot_edge.size());
      slot_edge.push_back(static_cast<int>(e));
      slot_ends.emplace_back(ed.u, ed.v);
      adj[ed.u].emplace_back(ed.v, s);
      adj[ed.v].emplace_back(ed.u, s);
    }
    int pending = -1;
    for (int v = 0; v < n; ++v) {
      if (colors[v] != x || adj[v].size() % 2 == 0) continue;
      if (pending < 0) {
        pending = v;
        continue;
      }
      const int s = static_cast<int>(slot_edge.size());
      slot_edge.push_back(-1);
      slot_ends.emplace_back(pending, v);
      adj[pending].emplace_back(v, s);
      adj[v].emplace_back(pending, s);
      pending = -1;
    }
    if (pending >= 0) fail(ErrorCode::InvariantViolation, "odd number of odd-degree nodes");
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<bool> used(slot_edge.size(), false);
    std::vector<std::size_t> next(n, 0);
    for (int start = 0; start < n; ++start) {
      // Hierholzer: the stack holds (node, slot used to enter it).
      std::vector<std::pair<int, int>> stack{{start, -1}};
      while (!stack.empty()) {
        const int v = stack.back().first;
        auto& it = next[v];
        while (it < adj[v].size() && used[adj[v][it].second]) ++it;
        if (it == adj[v].size()) {
          const int s = stack.back().second;
          stack.pop_back();
          if (s >= 0 && slot_edge[s] >= 0) {
            // Circuit edges pop in reverse, so stack.back() -> v is the traversal direction.
            const int from = stack.back().first;
            const auto& ed = graph.edges()[slot_edge[s]];
            orient[slot_edge[s]] = from == ed.u ? 1 : -1;
          }
          continue;
        }
        const auto [to, s] = adj[v][it];
        used[s] = true;
        stack.emplace_back(to, s);
      }
    }
  }
  res.output.colors = colors;
  return res;
}

std::optional<std::vector<std::int8_t>> balanced_orientation(const ColoredGraph& graph,
                                                             const LdcInstance& inst,
                                                             const std::vector<Color>& colors) {
  const int n = graph.n();
  const auto& edges = graph.edges();
  std::vector<std::int64_t> cap(n);
  for (int v = 0; v < n; ++v) cap[v] = inst.defect(v, colors[v]);
  // Each conflict edge is owned by its tail; owners hold at most d_v(φ(v)) edges.
  std::vector<int> owner(edges.size(), -1);
  std::vector<std::vector<int>> owned(n);
  auto release = [&](int v, int e) {
    auto& o = owned[v];
    o.erase(std::find(o.begin(), o.end(), e));
  };
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto diff = colors[edges[e].u] - colors[edges[e].v];
    if (diff > inst.g || -diff > inst.g) continue;
    // Breadth-first search for an augmenting path to a node with spare capacity.
    std::vector<int> parent(n, -2);
    std::vector<int> via(n, -1);
    std::vector<int> queue;
    for (int v : {edges[e].u, edges[e].v}) {
      parent[v] = -1;
      via[v] = static_cast<int>(e);
      queue.push_back(v);
    }
    int found = -1;
    for (std::size_t head = 0; head < queue.size() && found < 0; ++head) {
      const int x = queue[head];
      if (static_cast<std::int64_t>(owned[x].size()) < cap[x]) {
        found = x;
        break;
      }
      for (int f : owned[x]) {
        const int y = edges[f].u == x ? edges[f].v : edges[f].u;
        if (parent[y] != -2) continue;
        parent[y] = x;
        via[y] = f;
        queue.push_back(y);
      }
    }
    if (found < 0) return std::nullopt;
    for (int cur = found; cur >= 0; cur = parent[cur]) {
      const int f = via[cur];
      if (owner[f] >= 0) release(owner[f], f);
      owner[f] = cur;
      owned[cur].push_back(f);
    }
  }
  std::vector<std::int8_t> orient(edges.size(), 1);
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (owner[e] >= 0) orient[e] = owner[e] == edges[e].u ? 1 : -1;
  return orient;
}

ExhaustiveResult exhaustive_solve(const ColoredGraph& graph, const LdcInstance& inst,
                                  std::uint64_t cap) {
  const int n = graph.n();
  if (inst.flavor == Flavor::Oriented && !graph.has_orientation())
    fail(ErrorCode::MissingOrientation, "oriented flavor needs a graph orientation");
  long double space = 1;
  for (const auto& l : inst.lists) {
    if (l.empty()) {
      ExhaustiveResult r;
      return r;
    }
    space *= static_cast<long double>(l.size());
    if (space > static_cast<long double>(cap))
      fail(ErrorCode::CapExceeded, "search space exceeds cap " + std::to_string(cap));
  }
  ExhaustiveResult res;
  std::vector<Color> colors(n, kNoColor);
  std::vector<std::int64_t> load(n, 0);
  const bool arb = inst.flavor == Flavor::Arbdefective;
  auto conflicts = [&](Color a, Color b) { return a - b <= inst.g && b - a <= inst.g; };

  std::function<bool(int)> dfs = [&](int v) -> bool {
    if (v == n) {
      ++res.leaves;
      if (!arb) return true;
      auto o = balanced_orientation(graph, inst, colors);
      if (!o) return false;
      res.output.orientation = *o;
      return true;
    }
    for (std::size_t i = 0; i < inst.lists[v].size(); ++i) {
      const Color x = inst.lists[v][i];
      colors[v] = x;
      std::vector<int> bumped;
      bool ok = true;
      auto nb = graph.neighbors(v);
      for (std::size_t pos = 0; pos < nb.size() && ok; ++pos) {
        const int u = nb[pos];
        if (u > v || !conflicts(colors[u], x)) continue;
        if (arb) continue;  // orientation is checked at the leaves
        int tail = -1;
        int tail2 = -1;
        if (inst.flavor == Flavor::Defective) {
          tail = u;
          tail2 = v;
        } else {
          tail = graph.points_out(v, pos) ? v : u;
        }
        for (int t : {tail, tail2}) {
          if (t < 0) continue;
          ++load[t];
          bumped.push_back(t);
          if (load[t] > inst.defect(t, colors[t])) ok = false;
        }
      }
      if (ok && dfs(v + 1)) return true;
      for (int t : bumped) --load[t];
      colors[v] = kNoColor;
    }
    return false;
  };
  res.sat = dfs(0);
  if (res.sat) {
    res.output.colors = colors;
    if (!arb) res.output.orientation.clear();
  }
  return res;
}

}  // namespace listdefect
