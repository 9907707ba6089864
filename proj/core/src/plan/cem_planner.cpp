#include <algorithm>
#include <cmath>
#include <numeric>

#include "stlflow/plan/planners.hpp"

namespace stlflow {

PlanResult cem_plan(const EnvModel &env, const std::vector<double> &x0,
                    const StlPtr &spec, const CemConfig &cfg, Rng &rng,
                    std::vector<double> *std_trace) {
  if (horizon(spec) > env.T)
    throw HorizonError("spec horizon exceeds env horizon");
  if (cfg.elite > cfg.population)
    throw std::invalid_argument("CEM elite size must be <= population");

  const size_t dim = static_cast<size_t>(env.T) * env.m;
  std::vector<double> mean(dim, 0.0), std(dim, cfg.init_std);

  PlanResult best;
  bool have_best = false;
  std::vector<std::vector<double>> samples(cfg.population, std::vector<double>(dim));
  std::vector<double> scores(cfg.population);
  std::vector<int> order(cfg.population);
  Mat controls(env.T, env.m);

  for (int it = 0; it < cfg.iters; ++it) {
    for (int p = 0; p < cfg.population; ++p) {
      for (size_t i = 0; i < dim; ++i)
        samples[p][i] = mean[i] + std[i] * gaussian(rng);
      controls.v = samples[p];
      Trajectory tau = env.rollout(x0, controls);
      scores[p] = robustness(tau, 0, spec);
      if (!have_best || scores[p] > best.robustness) {
        best = {controls, std::move(tau), scores[p]};
        have_best = true;
      }
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    int k = std::max(cfg.elite, 1);
    for (size_t i = 0; i < dim; ++i) {
      double mu = 0.0;
      for (int e = 0; e < k; ++e) mu += samples[order[e]][i];
      mu /= k;
      double var = 0.0;
      for (int e = 0; e < k; ++e) {
        double d = samples[order[e]][i] - mu;
        var += d * d;
      }
      mean[i] = mu;
      std[i] = std::sqrt(var / k) + 1e-8;
    }
    if (std_trace) {
      double s = std::accumulate(std.begin(), std.end(), 0.0) / dim;
      std_trace->push_back(s);
    }
  }
  return best;
}

}  // namespace stlflow
