#include "stlflow/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stlflow::nn {

void fit_normalization(FlowModel &model, const std::vector<Trajectory> &trajs) {
  const int n = model.cfg.n, m = model.cfg.m;
  std::vector<double> sum(size_t(n + m), 0.0), sumsq(size_t(n + m), 0.0);
  std::vector<long> count(size_t(n + m), 0);
  for (const auto &traj : trajs) {
    for (int t = 1; t <= traj.horizon(); ++t)
      for (int j = 0; j < n; ++j) {
        double x = traj.states(t, j);
        sum[j] += x;
        sumsq[j] += x * x;
        ++count[j];
      }
    for (int t = 0; t < traj.horizon(); ++t)
      for (int j = 0; j < m; ++j) {
        double u = traj.controls(t, j);
        sum[n + j] += u;
        sumsq[n + j] += u * u;
        ++count[n + j];
      }
  }
  for (int j = 0; j < n + m; ++j) {
    if (count[j] == 0) throw std::invalid_argument("fit_normalization: no data");
    double mean = sum[j] / count[j];
    double var = sumsq[j] / count[j] - mean * mean;
    model.norm_mean[j] = mean;
    model.norm_std[j] = std::max(std::sqrt(std::max(var, 0.0)), 1e-6);
  }
}

double train(FlowModel &model, const std::vector<SpecGraph> &graphs,
             const std::vector<Trajectory> &trajs, const TrainConfig &config, Rng &rng,
             const std::function<void(int, double)> &progress) {
  if (graphs.size() != trajs.size() || graphs.empty())
    throw std::invalid_argument("train: mismatched or empty dataset");
  if (model.epoch == 0) fit_normalization(model, trajs);

  AdamOpt opt(model.params(), config.lr);
  std::vector<size_t> order(graphs.size());
  std::iota(order.begin(), order.end(), 0);

  double last = 0.0;
  const double decay_epochs = std::max(1.0, config.decay_frac * config.epochs);
  for (int e = 0; e < config.epochs; ++e) {
    double lr = config.lr_min;
    if (model.epoch < decay_epochs)
      lr += 0.5 * (config.lr - config.lr_min) *
            (1.0 + std::cos(M_PI * model.epoch / decay_epochs));
    opt.set_lr(lr);

    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    int batches = 0;
    for (size_t b = 0; b < order.size(); b += config.batch) {
      size_t end = std::min(order.size(), b + config.batch);
      std::vector<const SpecGraph *> gs;
      std::vector<const Trajectory *> xs;
      for (size_t i = b; i < end; ++i) {
        gs.push_back(&graphs[order[i]]);
        xs.push_back(&trajs[order[i]]);
      }
      opt.zero_grad();
      Tensor loss = flow_loss(model, gs, xs, rng);
      loss.backward();
      opt.step();
      epoch_loss += loss.at(0, 0);
      ++batches;
    }
    last = epoch_loss / batches;
    ++model.epoch;
    if (progress) progress(static_cast<int>(model.epoch), last);
  }
  return last;
}

}  // namespace stlflow::nn
