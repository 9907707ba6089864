#pragma once

#include <stdexcept>

#include "stlflow/stl/ast.hpp"
#include "stlflow/trajectory.hpp"

namespace stlflow {

class HorizonError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Maximum time index evaluation at t=0 may touch. Interval overruns are
// clipped to T at evaluation time; this reports the un-clipped requirement
// so callers can pre-validate.
int horizon(const StlPtr &spec);

// Boolean satisfaction over discrete inclusive intervals. Until uses the
// inner quantifier over [t, t'], consistent with the robustness recursion.
bool eval_bool(const Trajectory &s, int t, const StlPtr &spec);

// Quantitative robustness: min/max recursion over discrete indices.
// Sign agrees with eval_bool whenever the value is nonzero.
double robustness(const Trajectory &s, int t, const StlPtr &spec);

}  // namespace stlflow
