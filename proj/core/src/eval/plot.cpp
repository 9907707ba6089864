#include "stlflow/eval/plot.hpp"

#include <fstream>
#include <sstream>

#include "stlflow/stl/json.hpp"

namespace stlflow {

nlohmann::json plot_to_json(const PlotData &data) {
  nlohmann::json trajs = nlohmann::json::array();
  for (const auto &t : data.trajectories) trajs.push_back(trajectory_to_json(t));
  return {{"scene", data.scene.to_json()},
          {"trajectories", trajs},
          {"best_index", data.best_index}};
}

namespace {

// y axis flipped so larger world y draws upward
struct SvgMap {
  double scale, x0, y0, height;
  SvgMap(const Workspace &ws, double size)
      : scale(size / (ws.xmax - ws.xmin)), x0(ws.xmin), y0(ws.ymin), height(size) {}
  double x(double wx) const { return (wx - x0) * scale; }
  double y(double wy) const { return height - (wy - y0) * scale; }
};

void draw_predicate(std::ostringstream &svg, const SvgMap &map, const Predicate &p,
                    const char *fill) {
  double e = p.extent * map.scale;
  if (p.shape == Shape::Circle) {
    svg << "<circle cx=\"" << map.x(p.center[0]) << "\" cy=\"" << map.y(p.center[1])
        << "\" r=\"" << e << "\" fill=\"" << fill << "\" fill-opacity=\"0.6\"/>\n";
  } else {
    svg << "<rect x=\"" << map.x(p.center[0]) - e << "\" y=\"" << map.y(p.center[1]) - e
        << "\" width=\"" << 2 * e << "\" height=\"" << 2 * e << "\" fill=\"" << fill
        << "\" fill-opacity=\"0.6\"/>\n";
  }
}

void draw_path(std::ostringstream &svg, const SvgMap &map, const Trajectory &t,
               const char *stroke, double width, double opacity) {
  svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
      << "\" stroke-opacity=\"" << opacity << "\" points=\"";
  for (int k = 0; k < t.states.rows; ++k)
    svg << map.x(t.states(k, 0)) << ',' << map.y(t.states(k, 1)) << ' ';
  svg << "\"/>\n";
}

}  // namespace

std::string render_svg(const PlotData &data, const Workspace &ws) {
  const double size = 512.0;
  SvgMap map(ws, size);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << size << ' '
      << size * (ws.ymax - ws.ymin) / (ws.xmax - ws.xmin) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto &o : data.scene.obstacles) draw_predicate(svg, map, o, "#808080");
  for (const auto &g : data.scene.goals) draw_predicate(svg, map, g, "#3366cc");
  for (size_t i = 0; i < data.trajectories.size(); ++i)
    if (static_cast<int>(i) != data.best_index)
      draw_path(svg, map, data.trajectories[i], "#999999", 1.0, 0.4);
  if (data.best_index >= 0 &&
      data.best_index < static_cast<int>(data.trajectories.size()))
    draw_path(svg, map, data.trajectories[data.best_index], "#8b0000", 2.5, 1.0);
  if (!data.scene.agent_init.empty())
    svg << "<circle cx=\"" << map.x(data.scene.agent_init[0]) << "\" cy=\""
        << map.y(data.scene.agent_init[1])
        << "\" r=\"4\" fill=\"black\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

void export_plot_data(const PlotData &data, const Workspace &ws,
                      const std::string &json_path, const std::string &svg_path) {
  {
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + json_path);
    out << plot_to_json(data).dump(2) << '\n';
  }
  if (!svg_path.empty()) {
    std::ofstream out(svg_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + svg_path);
    out << render_svg(data, ws);
  }
}

namespace {

bool type_matches(const nlohmann::json &v, const std::string &ty) {
  if (ty == "object") return v.is_object();
  if (ty == "array") return v.is_array();
  if (ty == "string") return v.is_string();
  if (ty == "number") return v.is_number();
  if (ty == "integer") return v.is_number_integer();
  if (ty == "boolean") return v.is_boolean();
  if (ty == "null") return v.is_null();
  return false;
}

bool check(const nlohmann::json &doc, const nlohmann::json &schema, std::string path,
           std::string *why) {
  if (schema.contains("type") && !type_matches(doc, schema["type"].get<std::string>())) {
    if (why) *why = path + ": expected " + schema["type"].get<std::string>();
    return false;
  }
  if (schema.contains("required"))
    for (const auto &key : schema["required"]) {
      if (!doc.contains(key.get<std::string>())) {
        if (why) *why = path + ": missing " + key.get<std::string>();
        return false;
      }
    }
  if (schema.contains("properties") && doc.is_object())
    for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
      if (doc.contains(it.key()) &&
          !check(doc[it.key()], it.value(), path + "/" + it.key(), why))
        return false;
  if (schema.contains("items") && doc.is_array())
    for (size_t i = 0; i < doc.size(); ++i)
      if (!check(doc[i], schema["items"], path + "/" + std::to_string(i), why))
        return false;
  return true;
}

}  // namespace

bool json_matches_schema(const nlohmann::json &doc, const nlohmann::json &schema,
                         std::string *why) {
  return check(doc, schema, "$", why);
}

}  // namespace stlflow
