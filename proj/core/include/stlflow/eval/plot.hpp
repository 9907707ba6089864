#pragma once

#include <string>

#include "stlflow/data/scene.hpp"
#include "stlflow/trajectory.hpp"

namespace stlflow {

struct PlotData {
  SceneSpec scene;
  std::vector<Trajectory> trajectories;
  int best_index = -1;  // highlighted dark red; -1 when no trajectories
};

nlohmann::json plot_to_json(const PlotData &data);

// Standalone SVG: goals blue, obstacles gray, best trajectory dark red, other
// trajectories light. Workspace corners map to viewBox corners exactly.
std::string render_svg(const PlotData &data, const Workspace &ws);

// Writes the JSON and, when svg_path is nonempty, the rendered SVG.
void export_plot_data(const PlotData &data, const Workspace &ws,
                      const std::string &json_path, const std::string &svg_path = "");

// Checker for the subset of JSON Schema used by docs/plot_schema.json:
// "type", "properties", "required", "items". why receives the first
// violation path when non-null.
bool json_matches_schema(const nlohmann::json &doc, const nlohmann::json &schema,
                         std::string *why = nullptr);

}  // namespace stlflow
