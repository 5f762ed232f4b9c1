#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace listdefect {

using Color = std::int64_t;
inline constexpr Color kNoColor = -1;

enum class Flavor { Defective, Oriented, Arbdefective };

Flavor parse_flavor(std::string_view name);
std::string_view to_string(Flavor flavor);

// Undirected edge with u < v.
struct Edge {
  int u;
  int v;
};

// Simple graph with an initial proper m-coloring and an optional orientation.
// Immutable once built; every accessor is const.
class ColoredGraph {
 public:
  ColoredGraph() = default;
  ColoredGraph(int n, const std::vector<std::pair<int, int>>& edges);

  // Without an explicit coloring the node ids serve as an n-coloring.
  void set_init_colors(std::vector<std::int64_t> colors, std::int64_t m);
  // Arcs are (tail, head); every undirected edge must appear exactly once.
  void set_orientation(const std::vector<std::pair<int, int>>& arcs);
  // forward[e] means edges()[e].u -> edges()[e].v.
  void set_orientation_bits(std::vector<bool> forward);
  void orient_by_id();
  void clear_orientation();

  int n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int v) const;
  std::span<const int> incident_edges(int v) const;
  int degree(int v) const;
  int max_degree() const;

  bool has_orientation() const { return oriented_; }
  bool forward(std::size_t e) const { return forward_[e]; }
  // True when the edge at adjacency position pos of v points away from v.
  bool points_out(int v, std::size_t pos) const;
  std::vector<int> out_neighbors(int v) const;
  int out_degree(int v) const;
  // max(1, outdegree).
  int beta(int v) const;
  int max_beta() const;
  std::vector<std::pair<int, int>> arcs() const;

  std::int64_t init_color(int v) const { return init_colors_[v]; }
  const std::vector<std::int64_t>& init_colors() const { return init_colors_; }
  std::int64_t m() const { return m_; }

  std::optional<std::size_t> edge_id(int u, int v) const;

  // Subgraph induced by nodes (sorted ascending); keeps init colors and orientation.
  ColoredGraph induced(const std::vector<int>& nodes) const;
  // Same node set, only edges with keep[e].
  ColoredGraph edge_subgraph(const std::vector<bool>& keep) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<int> adj_;
  std::vector<int> adj_edge_;
  std::vector<bool> forward_;
  bool oriented_ = false;
  std::vector<std::int64_t> init_colors_;
  std::int64_t m_ = 0;
};

struct LdcInstance {
  std::vector<Color> color_space;
  std::vector<std::vector<Color>> lists;
  std::vector<std::vector<std::int64_t>> defects;  // aligned with lists
  Flavor flavor = Flavor::Defective;
  std::int64_t g = 0;

  // Sorts lists, checks subset and defect invariants; throws Error on violation.
  void validate(int n) const;
  std::size_t max_list_size() const;
  // -1 when x is not in L_v.
  std::int64_t defect(int v, Color x) const;
  bool in_list(int v, Color x) const;
};

struct ColoringOutput {
  std::vector<Color> colors;
  // Per edge: +1 means u -> v, -1 means v -> u, 0 unset.
  std::vector<std::int8_t> orientation;
};

struct ValidityReport {
  bool valid = true;
  std::vector<int> conflicts;
  std::vector<int> violators;
};

ValidityReport validate_ldc(const ColoredGraph& graph, const LdcInstance& inst,
                            const ColoringOutput& out);

// Strict sum condition per node: sum(d+1) > deg, or sum(2d+1) > deg for arbdefective.
std::vector<bool> check_existence_condition(const ColoredGraph& graph, const LdcInstance& inst);

ColoringOutput orientation_from_graph(const ColoredGraph& graph, std::vector<Color> colors);

}  // namespace listdefect
