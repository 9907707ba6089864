#pragma once

#include "stlflow/stl/semantics.hpp"

namespace stlflow {

enum class SmoothMode { Hard, Soft };

struct SmoothConfig {
  double beta = 10.0;  // sharpness of the soft min/max; must be > 0
  SmoothMode mode = SmoothMode::Soft;
};

struct SmoothResult {
  double value = 0.0;
  Mat state_grad;  // (T+1) x n, d value / d states
};

// Robustness with every min replaced by softmin(v) = -(1/beta) log sum exp(-beta v)
// and every max by the mirrored softmax, plus the exact gradient of the result
// w.r.t. every state entry via reverse accumulation. Hard mode uses true
// min/max with argmax subgradients. log-sum-exp is max-shifted.
SmoothResult smooth_robustness(const Trajectory &s, int t, const StlPtr &spec,
                               const SmoothConfig &cfg);

}  // namespace stlflow
