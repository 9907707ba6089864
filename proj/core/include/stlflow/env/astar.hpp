#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "stlflow/env/env.hpp"

namespace stlflow {

class UnreachableError : public std::runtime_error {
 public:
  UnreachableError(int goal_index)
      : std::runtime_error("goal " + std::to_string(goal_index) +
                           " unreachable from previous cell"),
        goal_index_(goal_index) {}
  int goal_index() const { return goal_index_; }

 private:
  int goal_index_;
};

// Concatenated 4-connected shortest grid paths visiting goal_cells in order,
// returned as world-coordinate waypoints at cell centers (start included).
std::vector<std::array<double, 2>> astar_plan(
    const MazeLayout &layout, std::array<int, 2> start_cell,
    const std::vector<std::array<int, 2>> &goal_cells);

}  // namespace stlflow
