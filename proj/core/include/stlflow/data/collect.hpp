#pragma once

#include "stlflow/data/scene.hpp"
#include "stlflow/env/tracking.hpp"
#include "stlflow/plan/planners.hpp"

namespace stlflow {

enum class Solver { Grad, Cem, AstarTrack };

class InferenceFailed : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CollectConfig {
  GradConfig grad;
  CemConfig cem;
  TrackingGains gains;
};

// Runs the solver from k random initializations and keeps only trajectories
// with hard robustness >= 0 (up to k). May return fewer, including none;
// callers discard the spec in that case. AstarTrack is GridMaze-only.
std::vector<Trajectory> collect_demo(const EnvModel &env, const StlPtr &spec,
                                     const SceneSpec &scene, Solver solver, int k,
                                     Rng &rng, const CollectConfig &cfg = {});

// For every Eventually node whose interval is exactly [0, T] (the placeholder
// convention), finds the steps where its goal subformula holds along tau,
// samples an interval containing one of them, and post-verifies the rewritten
// spec against tau (<= 100 retries).
StlPtr infer_intervals(const StlPtr &skeleton, const Trajectory &tau, Rng &rng);

}  // namespace stlflow
