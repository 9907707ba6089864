#pragma once

#include <cmath>

#include "stlflow/mat.hpp"

namespace stlflow {

// Time-indexed state + control signal. states has T+1 rows of dimension n,
// controls has T rows of dimension m. When produced by rollout,
// states[t+1] = f(states[t], controls[t]) holds exactly.
struct Trajectory {
  Mat states;    // (T+1) x n
  Mat controls;  // T x m
  double dt = 0.0;

  int horizon() const { return controls.rows; }
  int state_dim() const { return states.cols; }
  int control_dim() const { return controls.cols; }

  bool finite() const {
    for (double x : states.v)
      if (!std::isfinite(x)) return false;
    for (double x : controls.v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

}  // namespace stlflow
