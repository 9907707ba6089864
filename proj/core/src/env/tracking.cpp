#include "stlflow/env/tracking.hpp"

#include <cmath>
#include <stdexcept>

namespace stlflow {

Trajectory track_waypoints(const EnvModel &env, const std::vector<double> &x0,
                           const std::vector<std::array<double, 2>> &waypoints,
                           const TrackingGains &gains) {
  if (env.kind != EnvKind::GridMaze)
    throw std::invalid_argument("track_waypoints requires a GridMaze env");
  if (waypoints.empty())
    throw std::invalid_argument("track_waypoints needs at least one waypoint");

  const double capture = gains.capture_radius_cells * env.maze.cell_size;
  Mat controls(env.T, env.m);
  std::vector<double> x = x0;
  size_t wp = 0;
  double prev_ex = 0, prev_ey = 0;
  bool have_prev = false;

  for (int t = 0; t < env.T; ++t) {
    while (wp + 1 < waypoints.size() &&
           std::hypot(x[0] - waypoints[wp][0], x[1] - waypoints[wp][1]) <= capture)
      ++wp;
    double ex = waypoints[wp][0] - x[0];
    double ey = waypoints[wp][1] - x[1];
    double ux = gains.kp * ex;
    double uy = gains.kp * ey;
    if (have_prev) {
      ux += gains.kd * (ex - prev_ex) / env.dt;
      uy += gains.kd * (ey - prev_ey) / env.dt;
    }
    prev_ex = ex;
    prev_ey = ey;
    have_prev = true;
    controls(t, 0) = std::clamp(ux, env.control_lo, env.control_hi);
    controls(t, 1) = std::clamp(uy, env.control_lo, env.control_hi);
    x = env.step(x.data(), controls.row(t));
  }
  return env.rollout(x0, controls);
}

}  // namespace stlflow
