#include "stlflow/stl/json.hpp"

#include <stdexcept>

namespace stlflow {

using nlohmann::json;

namespace {

const char *kind_name(Kind k) {
  switch (k) {
    case Kind::Top: return "top";
    case Kind::Ap: return "ap";
    case Kind::Not: return "not";
    case Kind::And: return "and";
    case Kind::Or: return "or";
    case Kind::Eventually: return "eventually";
    case Kind::Always: return "always";
    case Kind::Until: return "until";
  }
  return "?";
}

Kind kind_from_name(const std::string &name) {
  if (name == "top") return Kind::Top;
  if (name == "ap") return Kind::Ap;
  if (name == "not") return Kind::Not;
  if (name == "and") return Kind::And;
  if (name == "or") return Kind::Or;
  if (name == "eventually") return Kind::Eventually;
  if (name == "always") return Kind::Always;
  if (name == "until") return Kind::Until;
  throw std::invalid_argument("unknown node kind: " + name);
}

}  // namespace

json predicate_to_json(const Predicate &p) {
  return json{{"shape", p.shape == Shape::Circle ? "circle" : "box"},
              {"cx", p.center[0]},
              {"cy", p.center[1]},
              {"cz", p.center[2]},
              {"extent", p.extent},
              {"polarity", p.polarity == Polarity::Reach ? "reach" : "avoid"}};
}

Predicate predicate_from_json(const json &j) {
  Predicate p;
  std::string shape = j.at("shape");
  if (shape == "circle")
    p.shape = Shape::Circle;
  else if (shape == "box")
    p.shape = Shape::Box;
  else
    throw std::invalid_argument("unknown predicate shape: " + shape);
  p.center = {j.at("cx").get<double>(), j.at("cy").get<double>(),
              j.at("cz").get<double>()};
  p.extent = j.at("extent").get<double>();
  std::string pol = j.at("polarity");
  if (pol == "reach")
    p.polarity = Polarity::Reach;
  else if (pol == "avoid")
    p.polarity = Polarity::Avoid;
  else
    throw std::invalid_argument("unknown predicate polarity: " + pol);
  return p;
}

json spec_to_json(const StlPtr &spec) {
  json j;
  j["kind"] = kind_name(spec->kind);
  if (spec->kind == Kind::Eventually || spec->kind == Kind::Always ||
      spec->kind == Kind::Until) {
    j["a"] = spec->a;
    j["b"] = spec->b;
  }
  if (spec->kind == Kind::Ap) j["pred"] = predicate_to_json(spec->pred);
  if (!spec->children.empty()) {
    json kids = json::array();
    for (const auto &c : spec->children) kids.push_back(spec_to_json(c));
    j["children"] = kids;
  }
  return j;
}

StlPtr spec_from_json(const json &j) {
  Kind kind = kind_from_name(j.at("kind").get<std::string>());
  std::vector<StlPtr> kids;
  if (j.contains("children"))
    for (const auto &cj : j.at("children")) kids.push_back(spec_from_json(cj));
  switch (kind) {
    case Kind::Top:
      return StlExpr::top();
    case Kind::Ap:
      return StlExpr::ap(predicate_from_json(j.at("pred")));
    case Kind::Not:
      if (kids.size() != 1) throw std::invalid_argument("not needs 1 child");
      return StlExpr::negate(kids[0]);
    case Kind::And:
      return StlExpr::conj(std::move(kids));
    case Kind::Or:
      return StlExpr::disj(std::move(kids));
    case Kind::Eventually:
      if (kids.size() != 1) throw std::invalid_argument("eventually needs 1 child");
      return StlExpr::eventually(j.at("a"), j.at("b"), kids[0]);
    case Kind::Always:
      if (kids.size() != 1) throw std::invalid_argument("always needs 1 child");
      return StlExpr::always(j.at("a"), j.at("b"), kids[0]);
    case Kind::Until:
      if (kids.size() != 2) throw std::invalid_argument("until needs 2 children");
      return StlExpr::until(j.at("a"), j.at("b"), kids[0], kids[1]);
  }
  throw std::logic_error("unreachable");
}

json trajectory_to_json(const Trajectory &tau) {
  json states = json::array();
  for (int t = 0; t < tau.states.rows; ++t) {
    json row = json::array();
    for (int i = 0; i < tau.states.cols; ++i) row.push_back(tau.states(t, i));
    states.push_back(row);
  }
  json controls = json::array();
  for (int t = 0; t < tau.controls.rows; ++t) {
    json row = json::array();
    for (int i = 0; i < tau.controls.cols; ++i) row.push_back(tau.controls(t, i));
    controls.push_back(row);
  }
  return json{{"dt", tau.dt}, {"states", states}, {"controls", controls}};
}

Trajectory trajectory_from_json(const json &j) {
  Trajectory tau;
  tau.dt = j.at("dt").get<double>();
  const auto &states = j.at("states");
  const auto &controls = j.at("controls");
  int n = states.empty() ? 0 : static_cast<int>(states[0].size());
  int m = controls.empty() ? 0 : static_cast<int>(controls[0].size());
  tau.states = Mat(static_cast<int>(states.size()), n);
  tau.controls = Mat(static_cast<int>(controls.size()), m);
  for (int t = 0; t < tau.states.rows; ++t)
    for (int i = 0; i < n; ++i) tau.states(t, i) = states[t][i].get<double>();
  for (int t = 0; t < tau.controls.rows; ++t)
    for (int i = 0; i < m; ++i) tau.controls(t, i) = controls[t][i].get<double>();
  return tau;
}

}  // namespace stlflow
