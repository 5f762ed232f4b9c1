#include "listdefect/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "listdefect/error.hpp"

namespace listdefect {

namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(ErrorCode::Schema, std::string("missing field '") + key + "'");
  return *it;
}

std::vector<std::pair<int, int>> read_pairs(const nlohmann::json& arr, const char* what) {
  if (!arr.is_array()) fail(ErrorCode::Schema, std::string(what) + " must be an array");
  std::vector<std::pair<int, int>> out;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2)
      fail(ErrorCode::Schema, std::string(what) + " entries must be pairs");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

}  // namespace

Instance parse_instance(const nlohmann::json& doc) {
  try {
    const int n = field(doc, "n").get<int>();
    Instance out;
    out.graph = ColoredGraph(n, read_pairs(field(doc, "edges"), "edges"));
    if (doc.contains("init_colors") && !doc["init_colors"].is_null()) {
      auto colors = doc["init_colors"].get<std::vector<std::int64_t>>();
      std::int64_t m = 0;
      for (auto c : colors) m = std::max(m, c + 1);
      if (doc.contains("m")) m = doc["m"].get<std::int64_t>();
      out.graph.set_init_colors(std::move(colors), m);
    }
    if (doc.contains("orientation") && !doc["orientation"].is_null())
      out.graph.set_orientation(read_pairs(doc["orientation"], "orientation"));

    auto& inst = out.inst;
    inst.color_space = field(doc, "color_space").get<std::vector<Color>>();
    const auto& lists = field(doc, "lists");
    const auto& defects = field(doc, "defects");
    if (!lists.is_array() || !defects.is_array() || static_cast<int>(lists.size()) != n ||
        static_cast<int>(defects.size()) != n)
      fail(ErrorCode::Schema, "lists and defects need one entry per node");
    inst.lists.resize(n);
    inst.defects.resize(n);
    for (int v = 0; v < n; ++v) {
      auto l = lists[v].get<std::vector<Color>>();
      std::sort(l.begin(), l.end());
      const auto& dmap = defects[v];
      if (!dmap.is_object()) fail(ErrorCode::Schema, "defects entries must be objects");
      if (dmap.size() != l.size())
        fail(ErrorCode::Schema, "defect map of node " + std::to_string(v) + " does not match list");
      std::vector<std::int64_t> d;
      for (auto c : l) {
        auto it = dmap.find(std::to_string(c));
        if (it == dmap.end())
          fail(ErrorCode::Schema, "node " + std::to_string(v) + " has no defect for color " +
                                      std::to_string(c));
        d.push_back(it->get<std::int64_t>());
      }
      inst.lists[v] = std::move(l);
      inst.defects[v] = std::move(d);
    }
    inst.flavor = parse_flavor(doc.value("flavor", std::string("defective")));
    inst.g = doc.value("g", std::int64_t{0});
    inst.validate(n);
    return out;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, e.what());
  }
  return parse_instance(doc);
}

nlohmann::json instance_to_json(const Instance& instance) {
  const auto& g = instance.graph;
  const auto& inst = instance.inst;
  nlohmann::json doc;
  doc["n"] = g.n();
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  doc["edges"] = edges;
  if (g.has_orientation()) {
    auto arcs = nlohmann::json::array();
    for (auto [t, h] : g.arcs()) arcs.push_back({t, h});
    doc["orientation"] = arcs;
  }
  doc["init_colors"] = g.init_colors();
  doc["m"] = g.m();
  doc["color_space"] = inst.color_space;
  doc["lists"] = inst.lists;
  auto defects = nlohmann::json::array();
  for (std::size_t v = 0; v < inst.lists.size(); ++v) {
    nlohmann::json d = nlohmann::json::object();
    for (std::size_t i = 0; i < inst.lists[v].size(); ++i)
      d[std::to_string(inst.lists[v][i])] = inst.defects[v][i];
    defects.push_back(d);
  }
  doc["defects"] = defects;
  doc["flavor"] = std::string(to_string(inst.flavor));
  doc["g"] = inst.g;
  return doc;
}

std::string dump_instance(const Instance& instance) { return instance_to_json(instance).dump(); }

nlohmann::json coloring_to_json(const ColoredGraph& graph, const ColoringOutput& out) {
  nlohmann::json doc;
  doc["colors"] = out.colors;
  if (!out.orientation.empty()) {
    auto arcs = nlohmann::json::array();
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      const auto& ed = graph.edges()[e];
      if (out.orientation[e] > 0) arcs.push_back({ed.u, ed.v});
      else if (out.orientation[e] < 0) arcs.push_back({ed.v, ed.u});
    }
    doc["orientation"] = arcs;
  }
  return doc;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

}  // namespace listdefect
