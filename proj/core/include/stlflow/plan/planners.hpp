#pragma once

#include "stlflow/env/env.hpp"
#include "stlflow/rng.hpp"
#include "stlflow/stl/smooth.hpp"

namespace stlflow {

struct PlanResult {
  Mat controls;       // T x m
  Trajectory trajectory;
  double robustness = 0.0;  // hard robustness at t = 0
};

struct GradConfig {
  int iters = 50;      // 10 for the lite variant
  double lr = 0.05;
  double c1 = 1.0;     // control-bound hinge weight
  double c2 = 0.01;    // control magnitude weight
  double margin = 0.5;
  int restarts = 8;
  double beta = 10.0;  // smoothing temperature
  double init_std = 0.5;

  static GradConfig lite() {
    GradConfig c;
    c.iters = 10;
    return c;
  }
};

struct CemConfig {
  int population = 64;
  int elite = 25;
  int iters = 100;
  double init_std = 0.5;
};

// Gradient-based trajectory optimization: for each restart, Adam on
//   L = max(margin - rho_soft, 0) + c1 * mean(max(u^2 - 1, 0)) + c2 * mean(u^2)
// over the control tensor; returns the restart with highest hard robustness.
PlanResult grad_plan(const EnvModel &env, const std::vector<double> &x0,
                     const StlPtr &spec, const GradConfig &cfg, Rng &rng);

// Cross-entropy method: diagonal Gaussian over the control tensor, scored by
// hard robustness, elite refit per iteration, best-ever sample returned.
PlanResult cem_plan(const EnvModel &env, const std::vector<double> &x0,
                    const StlPtr &spec, const CemConfig &cfg, Rng &rng,
                    std::vector<double> *std_trace = nullptr);

}  // namespace stlflow
