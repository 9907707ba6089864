#pragma once

#include "stlflow/nn/gcn.hpp"
#include "stlflow/stl/ast.hpp"
#include "stlflow/trajectory.hpp"

namespace stlflow::nn {

struct FlowConfig {
  int T = 64;
  int n = 2;
  int m = 2;
  double dt = 0.5;
  GcnConfig gcn;
  std::vector<int> hidden = {512, 512};
  int time_embed_dim = 16;
  int ode_steps = 10;  // N_s: Euler steps at inference, also the training time grid
};

// Conditional flow matching model. The trajectory is flattened row-major with
// row t = (state_{t+1}, control_t), standardized per channel; the velocity
// network is an MLP over (X_t, x0, z, temb(t)).
struct FlowModel {
  FlowConfig cfg;
  GcnEncoder encoder;
  Mlp net;
  std::vector<double> norm_mean, norm_std;  // n + m channels
  uint64_t seed = 0;  // seed the parameters were initialized from
  long epoch = 0;

  FlowModel() = default;
  FlowModel(const FlowConfig &config, Rng &rng);

  int traj_dim() const { return cfg.T * (cfg.n + cfg.m); }
  std::vector<Tensor> params() const;

  // normalized flattened trajectory (length traj_dim())
  std::vector<double> flatten(const Trajectory &traj) const;
  Trajectory unflatten(const std::vector<double> &flat,
                       const std::vector<double> &x0) const;
  std::vector<double> normalize_x0(const std::vector<double> &x0) const;

  // velocity for a batch; all arguments are data tensors except that the
  // network parameters carry gradients
  Tensor velocity(const Tensor &xt, const Tensor &x0n, const Tensor &z,
                  const std::vector<double> &ts) const;
};

// Mean squared flow matching loss over a minibatch; interpolation times are
// drawn from the grid {0, 1, ..., N_s} / N_s.
Tensor flow_loss(const FlowModel &model, const std::vector<const SpecGraph *> &graphs,
                 const std::vector<const Trajectory *> &trajs, Rng &rng);

// Euler integration from Gaussian noise; `count` trajectories for one spec.
std::vector<Trajectory> sample(const FlowModel &model, const SpecGraph &graph,
                               const std::vector<double> &x0, int count, int ode_steps,
                               Rng &rng);

struct BestOf {
  int index = -1;
  double robustness = 0.0;
};

// Highest hard robustness; ties keep the lowest index.
BestOf best_of(const std::vector<Trajectory> &candidates, const StlPtr &spec);

}  // namespace stlflow::nn
