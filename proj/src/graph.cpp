#include "listdefect/graph.hpp"

#include <algorithm>
#include <numeric>

#include "listdefect/error.hpp"

namespace listdefect {

Flavor parse_flavor(std::string_view name) {
  if (name == "defective") return Flavor::Defective;
  if (name == "oriented") return Flavor::Oriented;
  if (name == "arbdefective") return Flavor::Arbdefective;
  fail(ErrorCode::Schema, "unknown flavor '" + std::string(name) + "'");
}

std::string_view to_string(Flavor flavor) {
  switch (flavor) {
    case Flavor::Defective: return "defective";
    case Flavor::Oriented: return "oriented";
    case Flavor::Arbdefective: return "arbdefective";
  }
  return "defective";
}

ColoredGraph::ColoredGraph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative node count");
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (a == b) fail(ErrorCode::InvalidArgument, "self-loop at node " + std::to_string(a));
    edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& x, const Edge& y) { return std::pair(x.u, x.v) < std::pair(y.u, y.v); });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      fail(ErrorCode::InvalidArgument, "multi-edge " + std::to_string(edges_[i].u) + "-" +
                                           std::to_string(edges_[i].v));
  }
  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  std::vector<std::pair<int, int>> slots(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    slots[fill[edges_[id].u]++] = {edges_[id].v, static_cast<int>(id)};
    slots[fill[edges_[id].v]++] = {edges_[id].u, static_cast<int>(id)};
  }
  adj_.resize(slots.size());
  adj_edge_.resize(slots.size());
  for (int v = 0; v < n; ++v) {
    std::sort(slots.begin() + offsets_[v], slots.begin() + offsets_[v + 1]);
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
      adj_[i] = slots[i].first;
      adj_edge_[i] = slots[i].second;
    }
  }
  init_colors_.resize(n);
  std::iota(init_colors_.begin(), init_colors_.end(), 0);
  m_ = n;
}

void ColoredGraph::set_init_colors(std::vector<std::int64_t> colors, std::int64_t m) {
  if (static_cast<int>(colors.size()) != n_)
    fail(ErrorCode::InvalidArgument, "init_colors size mismatch");
  for (auto c : colors)
    if (c < 0 || c >= m) fail(ErrorCode::InvalidArgument, "init color outside [m]");
  for (const auto& e : edges_)
    if (colors[e.u] == colors[e.v])
      fail(ErrorCode::InvalidArgument, "init_colors not proper on edge " + std::to_string(e.u) +
                                           "-" + std::to_string(e.v));
  init_colors_ = std::move(colors);
  m_ = m;
}

void ColoredGraph::set_orientation(const std::vector<std::pair<int, int>>& arcs) {
  if (arcs.size() != edges_.size())
    fail(ErrorCode::InvalidArgument, "orientation must list every edge exactly once");
  std::vector<bool> fwd(edges_.size(), false);
  std::vector<bool> seen(edges_.size(), false);
  for (auto [t, h] : arcs) {
    auto id = edge_id(t, h);
    if (!id) fail(ErrorCode::InvalidArgument, "orientation arc is not an edge");
    if (seen[*id]) fail(ErrorCode::InvalidArgument, "edge oriented twice");
    seen[*id] = true;
    fwd[*id] = (t < h);
  }
  forward_ = std::move(fwd);
  oriented_ = true;
}

void ColoredGraph::set_orientation_bits(std::vector<bool> forward) {
  if (forward.size() != edges_.size())
    fail(ErrorCode::InvalidArgument, "orientation size mismatch");
  forward_ = std::move(forward);
  oriented_ = true;
}

void ColoredGraph::orient_by_id() {
  forward_.assign(edges_.size(), true);
  oriented_ = true;
}

void ColoredGraph::clear_orientation() {
  forward_.clear();
  oriented_ = false;
}

std::span<const int> ColoredGraph::neighbors(int v) const {
  return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const int> ColoredGraph::incident_edges(int v) const {
  return {adj_edge_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

int ColoredGraph::degree(int v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }

int ColoredGraph::max_degree() const {
  int d = 0;
  for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
  return d;
}

bool ColoredGraph::points_out(int v, std::size_t pos) const {
  const auto e = adj_edge_[offsets_[v] + pos];
  const bool v_is_u = edges_[e].u == v;
  return forward_[e] == v_is_u;
}

std::vector<int> ColoredGraph::out_neighbors(int v) const {
  if (!has_orientation()) fail(ErrorCode::MissingOrientation, "graph has no orientation");
  std::vector<int> out;
  auto nb = neighbors(v);
  for (std::size_t i = 0; i < nb.size(); ++i)
    if (points_out(v, i)) out.push_back(nb[i]);
  return out;
}

int ColoredGraph::out_degree(int v) const {
  if (!has_orientation()) fail(ErrorCode::MissingOrientation, "graph has no orientation");
  int c = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(degree(v)); ++i) c += points_out(v, i);
  return c;
}

int ColoredGraph::beta(int v) const { return std::max(1, out_degree(v)); }

int ColoredGraph::max_beta() const {
  int b = 1;
  for (int v = 0; v < n_; ++v) b = std::max(b, beta(v));
  return b;
}

std::vector<std::pair<int, int>> ColoredGraph::arcs() const {
  std::vector<std::pair<int, int>> out;
  if (!has_orientation()) return out;
  for (std::size_t e = 0; e < edges_.size(); ++e)
    out.push_back(forward_[e] ? std::pair(edges_[e].u, edges_[e].v)
                              : std::pair(edges_[e].v, edges_[e].u));
  return out;
}

std::optional<std::size_t> ColoredGraph::edge_id(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) return std::nullopt;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(adj_edge_[offsets_[u] + (it - nb.begin())]);
}

ColoredGraph ColoredGraph::induced(const std::vector<int>& nodes) const {
  std::vector<int> index(n_, -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> es;
  std::vector<std::size_t> kept;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (index[edges_[e].u] >= 0 && index[edges_[e].v] >= 0) {
      es.emplace_back(index[edges_[e].u], index[edges_[e].v]);
      kept.push_back(e);
    }
  }
  ColoredGraph sub(static_cast<int>(nodes.size()), es);
  std::vector<std::int64_t> colors;
  for (int v : nodes) colors.push_back(init_colors_[v]);
  sub.init_colors_ = std::move(colors);
  sub.m_ = m_;
  if (has_orientation()) {
    std::vector<std::pair<int, int>> sub_arcs;
    for (auto e : kept) {
      int t = forward_[e] ? edges_[e].u : edges_[e].v;
      int h = forward_[e] ? edges_[e].v : edges_[e].u;
      sub_arcs.emplace_back(index[t], index[h]);
    }
    sub.set_orientation(sub_arcs);
  }
  return sub;
}

ColoredGraph ColoredGraph::edge_subgraph(const std::vector<bool>& keep) const {
  std::vector<std::pair<int, int>> es;
  std::vector<std::pair<int, int>> sub_arcs;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!keep[e]) continue;
    es.emplace_back(edges_[e].u, edges_[e].v);
    if (has_orientation())
      sub_arcs.push_back(forward_[e] ? std::pair(edges_[e].u, edges_[e].v)
                                     : std::pair(edges_[e].v, edges_[e].u));
  }
  ColoredGraph sub(n_, es);
  sub.init_colors_ = init_colors_;
  sub.m_ = m_;
  if (has_orientation()) sub.set_orientation(sub_arcs);
  return sub;
}

void LdcInstance::validate(int n) const {
  if (!std::is_sorted(color_space.begin(), color_space.end()) ||
      std::adjacent_find(color_space.begin(), color_space.end()) != color_space.end())
    fail(ErrorCode::Schema, "color_space must be strictly increasing");
  if (!color_space.empty() && color_space.front() < 0)
    fail(ErrorCode::Schema, "colors must be nonnegative");
  if (static_cast<int>(lists.size()) != n || static_cast<int>(defects.size()) != n)
    fail(ErrorCode::Schema, "lists/defects must have one entry per node");
  if (g < 0) fail(ErrorCode::Schema, "g must be nonnegative");
  for (int v = 0; v < n; ++v) {
    const auto& l = lists[v];
    if (defects[v].size() != l.size())
      fail(ErrorCode::Schema, "defect map of node " + std::to_string(v) + " does not match list");
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (i > 0 && l[i] <= l[i - 1])
        fail(ErrorCode::Schema, "list of node " + std::to_string(v) + " not strictly increasing");
      if (!std::binary_search(color_space.begin(), color_space.end(), l[i]))
        fail(ErrorCode::Schema, "list color outside color space at node " + std::to_string(v));
      if (defects[v][i] < 0) fail(ErrorCode::Schema, "negative defect");
    }
  }
}

std::size_t LdcInstance::max_list_size() const {
  std::size_t s = 0;
  for (const auto& l : lists) s = std::max(s, l.size());
  return s;
}

std::int64_t LdcInstance::defect(int v, Color x) const {
  const auto& l = lists[v];
  auto it = std::lower_bound(l.begin(), l.end(), x);
  if (it == l.end() || *it != x) return -1;
  return defects[v][it - l.begin()];
}

bool LdcInstance::in_list(int v, Color x) const { return defect(v, x) >= 0; }

ValidityReport validate_ldc(const ColoredGraph& graph, const LdcInstance& inst,
                            const ColoringOutput& out) {
  const int n = graph.n();
  if (static_cast<int>(out.colors.size()) != n)
    fail(ErrorCode::MissingColor, "coloring does not cover every node");
  for (int v = 0; v < n; ++v) {
    if (out.colors[v] == kNoColor)
      fail(ErrorCode::MissingColor, "node " + std::to_string(v) + " uncolored");
    if (!inst.in_list(v, out.colors[v]))
      fail(ErrorCode::ColorNotInList, "node " + std::to_string(v) + " color " +
                                          std::to_string(out.colors[v]) + " not in its list");
  }
  if (inst.flavor == Flavor::Oriented && !graph.has_orientation())
    fail(ErrorCode::MissingOrientation, "oriented flavor needs a graph orientation");
  if (inst.flavor == Flavor::Arbdefective) {
    if (out.orientation.size() != graph.edge_count())
      fail(ErrorCode::MissingOrientation, "arbdefective output lacks an orientation");
    for (auto o : out.orientation)
      if (o == 0) fail(ErrorCode::MissingOrientation, "arbdefective output has an unset edge");
  }
  ValidityReport rep;
  rep.conflicts.assign(n, 0);
  const auto& edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int u = edges[e].u;
    const int v = edges[e].v;
    const auto diff = out.colors[u] - out.colors[v];
    if (diff > inst.g || -diff > inst.g) continue;
    switch (inst.flavor) {
      case Flavor::Defective:
        ++rep.conflicts[u];
        ++rep.conflicts[v];
        break;
      case Flavor::Oriented:
        ++rep.conflicts[graph.forward(e) ? u : v];
        break;
      case Flavor::Arbdefective:
        ++rep.conflicts[out.orientation[e] > 0 ? u : v];
        break;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (rep.conflicts[v] > inst.defect(v, out.colors[v])) {
      rep.valid = false;
      rep.violators.push_back(v);
    }
  }
  return rep;
}

std::vector<bool> check_existence_condition(const ColoredGraph& graph, const LdcInstance& inst) {
  std::vector<bool> ok(graph.n());
  const std::int64_t factor = inst.flavor == Flavor::Arbdefective ? 2 : 1;
  for (int v = 0; v < graph.n(); ++v) {
    std::int64_t sum = 0;
    for (auto d : inst.defects[v]) sum += factor * d + 1;
    ok[v] = sum > graph.degree(v);
  }
  return ok;
}

ColoringOutput orientation_from_graph(const ColoredGraph& graph, std::vector<Color> colors) {
  ColoringOutput out;
  out.colors = std::move(colors);
  out.orientation.resize(graph.edge_count());
  for (std::size_t e = 0; e < graph.edge_count(); ++e)
    out.orientation[e] = graph.has_orientation() && !graph.forward(e) ? -1 : 1;
  return out;
}

}  // namespace listdefect
