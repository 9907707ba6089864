#include "stlflow/env/astar.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>

namespace stlflow {

namespace {

// Single-pair A* with Manhattan heuristic; deterministic tie-breaking on
// (f, g, cell index). Returns the cell path including both endpoints, or an
// empty vector when unreachable.
std::vector<std::array<int, 2>> astar_pair(const MazeLayout &maze,
                                           std::array<int, 2> start,
                                           std::array<int, 2> goal) {
  const int V = maze.rows * maze.cols;
  auto id = [&](int r, int c) { return r * maze.cols + c; };
  auto h = [&](int r, int c) { return std::abs(r - goal[0]) + std::abs(c - goal[1]); };

  std::vector<int> g(V, INT_MAX), parent(V, -1);
  using Entry = std::array<int, 3>;  // f, g, cell
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[id(start[0], start[1])] = 0;
  open.push({h(start[0], start[1]), 0, id(start[0], start[1])});
  const int dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};

  while (!open.empty()) {
    auto [f, gc, cell] = open.top();
    open.pop();
    if (gc != g[cell]) continue;
    int r = cell / maze.cols, c = cell % maze.cols;
    if (r == goal[0] && c == goal[1]) {
      std::vector<std::array<int, 2>> path;
      for (int cur = cell; cur != -1; cur = parent[cur])
        path.push_back({cur / maze.cols, cur % maze.cols});
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int k = 0; k < 4; ++k) {
      int nr = r + dr[k], nc = c + dc[k];
      if (maze.occupied_at(nr, nc)) continue;
      int nid = id(nr, nc);
      if (gc + 1 < g[nid]) {
        g[nid] = gc + 1;
        parent[nid] = cell;
        open.push({gc + 1 + h(nr, nc), gc + 1, nid});
      }
    }
  }
  return {};
}

}  // namespace

std::vector<std::array<double, 2>> astar_plan(
    const MazeLayout &layout, std::array<int, 2> start_cell,
    const std::vector<std::array<int, 2>> &goal_cells) {
  std::vector<std::array<double, 2>> waypoints;
  auto push = [&](std::array<int, 2> cell) {
    auto [x, y] = layout.cell_center(cell[0], cell[1]);
    waypoints.push_back({x, y});
  };
  push(start_cell);
  std::array<int, 2> cur = start_cell;
  for (size_t i = 0; i < goal_cells.size(); ++i) {
    auto path = astar_pair(layout, cur, goal_cells[i]);
    if (path.empty()) throw UnreachableError(static_cast<int>(i));
    for (size_t k = 1; k < path.size(); ++k) push(path[k]);
    cur = goal_cells[i];
  }
  return waypoints;
}

}  // namespace stlflow
