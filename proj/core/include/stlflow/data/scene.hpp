#pragma once

#include <json.hpp>
#include <stdexcept>

#include "stlflow/env/env.hpp"
#include "stlflow/rng.hpp"
#include "stlflow/stl/ast.hpp"

namespace stlflow {

class PlacementFailed : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Object placement for one generated specification. Goals are Reach
// predicates, obstacles Avoid; no two objects overlap and the agent spawns
// in free space.
struct SceneSpec {
  std::vector<Predicate> goals;
  std::vector<Predicate> obstacles;
  std::vector<double> agent_init;  // full env state
  std::string env_name;

  nlohmann::json to_json() const;
  static SceneSpec from_json(const nlohmann::json &j);
};

struct PlacementLimits {
  int max_goals = 4;
  int max_obstacles = 6;
  double goal_extent_lo = 0.5;
  double goal_extent_hi = 1.0;
  double obstacle_extent_lo = 0.4;
  double obstacle_extent_hi = 0.8;
  double clearance = 0.1;
  int max_rejections = 10000;
};

// Rejection-samples non-colliding object centers inside the workspace
// (pairwise center distance >= sum of extents + clearance) and spawns the
// agent in free space. Continuous envs use Circle objects; the maze env uses
// Box tiles on distinct free cells.
SceneSpec place_scene(const EnvModel &env, int n_goals, int n_obstacles, Rng &rng,
                      const PlacementLimits &limits = {});

// True when every pairwise clearance and the agent free-space condition hold.
bool scene_clearances_ok(const SceneSpec &scene, const EnvModel &env,
                         const PlacementLimits &limits = {});

}  // namespace stlflow
