#include "stlflow/env/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stlflow {

std::array<int, 2> MazeLayout::cell_of(double x, double y) const {
  int c = static_cast<int>(std::floor((x - origin[0]) / cell_size));
  int r = static_cast<int>(std::floor((y - origin[1]) / cell_size));
  return {r, c};
}

std::array<double, 2> MazeLayout::cell_center(int r, int c) const {
  return {origin[0] + cell_size * (c + 0.5), origin[1] + cell_size * (r + 0.5)};
}

MazeLayout MazeLayout::from_string(int rows, int cols, const std::string &cells,
                                   double cell_size, std::array<double, 2> origin) {
  if (static_cast<int>(cells.size()) != rows * cols)
    throw std::invalid_argument("maze cell string length != rows * cols");
  MazeLayout l;
  l.rows = rows;
  l.cols = cols;
  l.cell_size = cell_size;
  l.origin = origin;
  l.occupied.resize(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) l.occupied[i] = cells[i] == '#' ? 1 : 0;
  return l;
}

MazeLayout MazeLayout::from_json(const nlohmann::json &j) {
  return from_string(j.at("rows"), j.at("cols"), j.at("cells"),
                     j.at("cell_size"),
                     {j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>()});
}

nlohmann::json MazeLayout::to_json() const {
  std::string cells(occupied.size(), '.');
  for (size_t i = 0; i < occupied.size(); ++i)
    if (occupied[i]) cells[i] = '#';
  return {{"rows", rows},
          {"cols", cols},
          {"cells", cells},
          {"cell_size", cell_size},
          {"origin", {origin[0], origin[1]}}};
}

EnvModel EnvModel::linear() {
  EnvModel e;
  e.kind = EnvKind::Linear;
  e.n = 2;
  e.m = 2;
  e.dt = 0.5;
  e.T = 64;
  return e;
}

EnvModel EnvModel::dubins() {
  EnvModel e;
  e.kind = EnvKind::Dubins;
  e.n = 4;
  e.m = 2;
  e.dt = 0.5;
  e.T = 64;
  return e;
}

EnvModel EnvModel::grid_maze(MazeLayout layout, int T) {
  EnvModel e;
  e.kind = EnvKind::GridMaze;
  e.n = 2;
  e.m = 2;
  e.dt = 0.5;
  e.T = T;
  e.workspace = {layout.origin[0], layout.origin[0] + layout.cols * layout.cell_size,
                 layout.origin[1], layout.origin[1] + layout.rows * layout.cell_size};
  e.maze = std::move(layout);
  return e;
}

std::string EnvModel::name() const {
  switch (kind) {
    case EnvKind::Linear: return "linear";
    case EnvKind::Dubins: return "dubins";
    case EnvKind::GridMaze: return "gridmaze";
  }
  return "?";
}

namespace {

constexpr double kWallEps = 1e-9;

double clamp_control(double u, double lo, double hi) {
  return std::min(std::max(u, lo), hi);
}

// Per-axis move with wall clamping: the position is projected back to the
// boundary of the blocking cell.
void maze_move(const MazeLayout &maze, double *pos, double dx, double dy) {
  double nx = pos[0] + dx;
  auto [r0, c0] = maze.cell_of(pos[0], pos[1]);
  auto cx = maze.cell_of(nx, pos[1]);
  if (maze.occupied_at(cx[0], cx[1])) {
    if (dx > 0)
      nx = maze.origin[0] + cx[1] * maze.cell_size - kWallEps;
    else if (dx < 0)
      nx = maze.origin[0] + (cx[1] + 1) * maze.cell_size + kWallEps;
    else
      nx = pos[0];
    // stuck inside a wall cell (should not happen after clamping)
    if (maze.occupied_at(r0, maze.cell_of(nx, pos[1])[1])) nx = pos[0];
  }
  pos[0] = nx;
  double ny = pos[1] + dy;
  auto cy = maze.cell_of(pos[0], ny);
  if (maze.occupied_at(cy[0], cy[1])) {
    if (dy > 0)
      ny = maze.origin[1] + cy[0] * maze.cell_size - kWallEps;
    else if (dy < 0)
      ny = maze.origin[1] + (cy[0] + 1) * maze.cell_size + kWallEps;
    else
      ny = pos[1];
    if (maze.occupied_at(maze.cell_of(pos[0], ny)[0], c0)) ny = pos[1];
  }
  pos[1] = ny;
}

}  // namespace

std::vector<double> EnvModel::step(const double *x, const double *u) const {
  std::vector<double> uc(m);
  for (int i = 0; i < m; ++i) uc[i] = clamp_control(u[i], control_lo, control_hi);
  std::vector<double> next(x, x + n);
  switch (kind) {
    case EnvKind::Linear:
      next[0] += uc[0] * dt;
      next[1] += uc[1] * dt;
      break;
    case EnvKind::Dubins:
      next[0] += x[3] * std::cos(x[2]) * dt;
      next[1] += x[3] * std::sin(x[2]) * dt;
      next[2] += uc[0] * dt;
      next[3] += uc[1] * dt;
      break;
    case EnvKind::GridMaze:
      maze_move(maze, next.data(), uc[0] * dt, uc[1] * dt);
      break;
  }
  return next;
}

Trajectory EnvModel::rollout(const std::vector<double> &x0, const Mat &controls) const {
  if (static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("rollout: x0 dimension mismatch");
  if (controls.cols != m)
    throw std::invalid_argument("rollout: control dimension mismatch");
  Trajectory tau;
  tau.dt = dt;
  tau.controls = controls;
  tau.states = Mat(controls.rows + 1, n);
  std::copy(x0.begin(), x0.end(), tau.states.row(0));
  std::vector<double> x = x0;
  for (int t = 0; t < controls.rows; ++t) {
    x = step(x.data(), controls.row(t));
    std::copy(x.begin(), x.end(), tau.states.row(t + 1));
  }
  return tau;
}

Mat EnvModel::rollout_grad(const std::vector<double> &x0, const Mat &controls,
                           const Mat &upstream) const {
  const int Tn = controls.rows;
  if (upstream.rows != Tn + 1 || upstream.cols != n)
    throw std::invalid_argument("rollout_grad: upstream shape mismatch");
  Trajectory tau = rollout(x0, controls);
  Mat grad(Tn, m);
  std::vector<double> lambda(upstream.row(Tn), upstream.row(Tn) + n);
  for (int t = Tn - 1; t >= 0; --t) {
    const double *x = tau.states.row(t);
    const double *u = controls.row(t);
    std::vector<bool> clamped(m);
    for (int i = 0; i < m; ++i)
      clamped[i] = u[i] <= control_lo || u[i] >= control_hi;
    std::vector<double> prev(n, 0.0);
    switch (kind) {
      case EnvKind::Linear:
      case EnvKind::GridMaze: {
        // GridMaze treated as the unconstrained point mass; wall-clamped
        // steps zero out the moved axis below.
        bool wall_x = false, wall_y = false;
        if (kind == EnvKind::GridMaze) {
          const double *nx = tau.states.row(t + 1);
          double ux = clamp_control(u[0], control_lo, control_hi);
          double uy = clamp_control(u[1], control_lo, control_hi);
          wall_x = std::abs(nx[0] - (x[0] + ux * dt)) > 1e-12;
          wall_y = std::abs(nx[1] - (x[1] + uy * dt)) > 1e-12;
        }
        grad(t, 0) = (clamped[0] || wall_x) ? 0.0 : dt * lambda[0];
        grad(t, 1) = (clamped[1] || wall_y) ? 0.0 : dt * lambda[1];
        prev[0] = wall_x ? 0.0 : lambda[0];
        prev[1] = wall_y ? 0.0 : lambda[1];
        break;
      }
      case EnvKind::Dubins: {
        grad(t, 0) = clamped[0] ? 0.0 : dt * lambda[2];
        grad(t, 1) = clamped[1] ? 0.0 : dt * lambda[3];
        double theta = x[2], v = x[3];
        prev[0] = lambda[0];
        prev[1] = lambda[1];
        prev[2] = lambda[2] + dt * (-v * std::sin(theta) * lambda[0] +
                                    v * std::cos(theta) * lambda[1]);
        prev[3] = lambda[3] + dt * (std::cos(theta) * lambda[0] +
                                    std::sin(theta) * lambda[1]);
        break;
      }
    }
    for (int i = 0; i < n; ++i) lambda[i] = prev[i] + upstream(t, i);
  }
  return grad;
}

}  // namespace stlflow
