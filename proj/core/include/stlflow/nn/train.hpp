#pragma once

#include <functional>

#include "stlflow/nn/flow.hpp"

namespace stlflow::nn {

struct TrainConfig {
  int epochs = 40;
  int batch = 64;
  double lr = 5e-4;
  double lr_min = 5e-5;
  double decay_frac = 0.9;  // cosine decay over this fraction of epochs, then flat
};

// Per-channel standardization statistics from the training trajectories.
// Stores mean/std into the model; std is floored at 1e-6.
void fit_normalization(FlowModel &model, const std::vector<Trajectory> &trajs);

// Minibatch Adam training; graphs[i] pairs with trajs[i]. Fits normalization
// on the first call (model.epoch == 0). Returns the last epoch's mean loss.
// progress, when set, is called as progress(epoch, mean_loss).
double train(FlowModel &model, const std::vector<SpecGraph> &graphs,
             const std::vector<Trajectory> &trajs, const TrainConfig &config, Rng &rng,
             const std::function<void(int, double)> &progress = {});

}  // namespace stlflow::nn
