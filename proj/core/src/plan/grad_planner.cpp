#include <algorithm>

#include "stlflow/plan/adam.hpp"
#include "stlflow/plan/planners.hpp"

namespace stlflow {

namespace {

void check_horizon(const EnvModel &env, const StlPtr &spec) {
  if (horizon(spec) > env.T)
    throw HorizonError("spec horizon " + std::to_string(horizon(spec)) +
                       " exceeds env horizon " + std::to_string(env.T));
}

}  // namespace

PlanResult grad_plan(const EnvModel &env, const std::vector<double> &x0,
                     const StlPtr &spec, const GradConfig &cfg, Rng &rng) {
  check_horizon(env, spec);
  const int T = env.T, m = env.m;
  const double inv_tm = 1.0 / (T * m);
  SmoothConfig smooth{cfg.beta, SmoothMode::Soft};

  PlanResult best;
  bool have_best = false;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<double> u(static_cast<size_t>(T) * m);
    for (double &x : u)
      x = std::clamp(gaussian(rng, 0.0, cfg.init_std), env.control_lo, env.control_hi);

    Adam opt(cfg.lr);
    Mat controls(T, m);
    std::vector<double> grad(u.size());
    for (int it = 0; it < cfg.iters; ++it) {
      controls.v = u;
      Trajectory tau = env.rollout(x0, controls);
      SmoothResult sr = smooth_robustness(tau, 0, spec, smooth);

      // hinge on the soft robustness
      double dLdRho = sr.value < cfg.margin ? -1.0 : 0.0;
      Mat upstream = sr.state_grad;
      for (double &g : upstream.v) g *= dLdRho;
      Mat gu = env.rollout_grad(x0, controls, upstream);

      for (size_t i = 0; i < u.size(); ++i) {
        double ui = u[i];
        double reg = cfg.c2 * 2.0 * ui * inv_tm;
        if (ui * ui > 1.0) reg += cfg.c1 * 2.0 * ui * inv_tm;
        grad[i] = gu.v[i] + reg;
      }
      opt.step(u, grad);
    }

    controls.v = u;
    Trajectory tau = env.rollout(x0, controls);
    double rho = robustness(tau, 0, spec);
    if (!have_best || rho > best.robustness) {
      best = {controls, std::move(tau), rho};
      have_best = true;
    }
  }
  return best;
}

}  // namespace stlflow
