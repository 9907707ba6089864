#pragma once

#include <array>
#include <json.hpp>
#include <string>
#include <vector>

#include "stlflow/trajectory.hpp"

namespace stlflow {

enum class EnvKind { Linear, Dubins, GridMaze };

// Occupancy-grid maze. Cells are squares of side cell_size; world position of
// cell (r, c) center is origin + cell_size * (c + 0.5, r + 0.5).
struct MazeLayout {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> occupied;  // row-major, 1 = wall
  double cell_size = 1.0;
  std::array<double, 2> origin{0, 0};

  bool occupied_at(int r, int c) const {
    if (r < 0 || r >= rows || c < 0 || c >= cols) return true;
    return occupied[static_cast<size_t>(r) * cols + c] != 0;
  }
  std::array<int, 2> cell_of(double x, double y) const;
  std::array<double, 2> cell_center(int r, int c) const;

  // Layout file: {"rows": R, "cols": C, "cells": "...#..." row-major,
  //               "cell_size": f, "origin": [x, y]}
  static MazeLayout from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
  // '#' = wall, anything else free; rows separated implicitly by width.
  static MazeLayout from_string(int rows, int cols, const std::string &cells,
                                double cell_size = 1.0,
                                std::array<double, 2> origin = {0, 0});
};

struct Workspace {
  double xmin = -5, xmax = 5, ymin = -5, ymax = 5;
  double half_extent() const { return std::max(xmax - xmin, ymax - ymin) / 2; }
};

// Dynamics descriptor. Controls are clamped to [-1, 1] per dimension inside
// step for Linear/Dubins and GridMaze alike.
struct EnvModel {
  EnvKind kind = EnvKind::Linear;
  int n = 2;       // state dim
  int m = 2;       // control dim
  double dt = 0.5;
  int T = 64;      // horizon steps
  double control_lo = -1.0;
  double control_hi = 1.0;
  Workspace workspace;
  MazeLayout maze;  // GridMaze only

  static EnvModel linear();
  static EnvModel dubins();
  static EnvModel grid_maze(MazeLayout layout, int T = 128);

  std::string name() const;

  // Single dynamics step; x has n entries, u has m entries.
  std::vector<double> step(const double *x, const double *u) const;

  Trajectory rollout(const std::vector<double> &x0, const Mat &controls) const;

  // Reverse accumulation through the rollout recurrence. upstream is the
  // gradient of some scalar w.r.t. all states ((T+1) x n); returns the
  // gradient w.r.t. controls (T x m). Clamped control dims get zero gradient.
  Mat rollout_grad(const std::vector<double> &x0, const Mat &controls,
                   const Mat &upstream) const;
};

}  // namespace stlflow
