#pragma once

#include "stlflow/env/astar.hpp"

namespace stlflow {

struct TrackingGains {
  double kp = 1.2;
  double kd = 0.4;
  double capture_radius_cells = 0.3;  // in units of cell_size
};

// Proportional-derivative waypoint tracker for the grid maze. Drives toward
// the current waypoint, advancing when within the capture radius, and emits
// a full-horizon trajectory. May fail to reach; callers verify robustness.
Trajectory track_waypoints(const EnvModel &env, const std::vector<double> &x0,
                           const std::vector<std::array<double, 2>> &waypoints,
                           const TrackingGains &gains = {});

}  // namespace stlflow
