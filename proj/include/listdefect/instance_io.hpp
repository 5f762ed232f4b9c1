#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "listdefect/graph.hpp"

namespace listdefect {

struct Instance {
  ColoredGraph graph;
  LdcInstance inst;
};

// Schema: {n, edges, orientation?, init_colors?, m?, color_space, lists, defects, flavor, g}.
// defects[v] is an object keyed by the decimal color.
Instance parse_instance(const nlohmann::json& doc);
Instance load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const Instance& instance);
// Compact dump with sorted keys; identical instances give identical bytes.
std::string dump_instance(const Instance& instance);

nlohmann::json coloring_to_json(const ColoredGraph& graph, const ColoringOutput& out);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace listdefect
