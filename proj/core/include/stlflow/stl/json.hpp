#pragma once

#include <json.hpp>

#include "stlflow/stl/ast.hpp"
#include "stlflow/trajectory.hpp"

namespace stlflow {

// Canonical interchange form:
//   {"kind": "...", "a": int, "b": int, "children": [...],
//    "pred": {"shape","cx","cy","cz","extent","polarity"}}
// a/b appear only on temporal nodes, pred only on Ap nodes.
nlohmann::json spec_to_json(const StlPtr &spec);
StlPtr spec_from_json(const nlohmann::json &j);

nlohmann::json predicate_to_json(const Predicate &p);
Predicate predicate_from_json(const nlohmann::json &j);

nlohmann::json trajectory_to_json(const Trajectory &tau);
Trajectory trajectory_from_json(const nlohmann::json &j);

}  // namespace stlflow
