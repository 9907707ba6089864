#include "stlflow/nn/flow.hpp"

#include <stdexcept>

#include "stlflow/stl/semantics.hpp"

namespace stlflow::nn {

FlowModel::FlowModel(const FlowConfig &config, Rng &rng) : cfg(config) {
  encoder = GcnEncoder(cfg.gcn, rng);
  int in = traj_dim() + cfg.n + cfg.gcn.out_dim + cfg.time_embed_dim;
  net = Mlp(in, cfg.hidden, traj_dim(), rng);
  norm_mean.assign(size_t(cfg.n + cfg.m), 0.0);
  norm_std.assign(size_t(cfg.n + cfg.m), 1.0);
}

std::vector<Tensor> FlowModel::params() const {
  std::vector<Tensor> out;
  encoder.collect_params(out);
  net.collect_params(out);
  return out;
}

std::vector<double> FlowModel::flatten(const Trajectory &traj) const {
  if (traj.horizon() != cfg.T || traj.state_dim() != cfg.n ||
      traj.control_dim() != cfg.m)
    throw std::invalid_argument("trajectory shape does not match model");
  const int ch = cfg.n + cfg.m;
  std::vector<double> flat(size_t(cfg.T) * ch);
  for (int t = 0; t < cfg.T; ++t) {
    for (int j = 0; j < cfg.n; ++j)
      flat[size_t(t) * ch + j] = (traj.states(t + 1, j) - norm_mean[j]) / norm_std[j];
    for (int j = 0; j < cfg.m; ++j)
      flat[size_t(t) * ch + cfg.n + j] =
          (traj.controls(t, j) - norm_mean[cfg.n + j]) / norm_std[cfg.n + j];
  }
  return flat;
}

Trajectory FlowModel::unflatten(const std::vector<double> &flat,
                                const std::vector<double> &x0) const {
  const int ch = cfg.n + cfg.m;
  Trajectory traj;
  traj.dt = cfg.dt;
  traj.states = Mat(cfg.T + 1, cfg.n);
  traj.controls = Mat(cfg.T, cfg.m);
  for (int j = 0; j < cfg.n; ++j) traj.states(0, j) = x0[j];
  for (int t = 0; t < cfg.T; ++t) {
    for (int j = 0; j < cfg.n; ++j)
      traj.states(t + 1, j) = flat[size_t(t) * ch + j] * norm_std[j] + norm_mean[j];
    for (int j = 0; j < cfg.m; ++j)
      traj.controls(t, j) =
          flat[size_t(t) * ch + cfg.n + j] * norm_std[cfg.n + j] + norm_mean[cfg.n + j];
  }
  return traj;
}

std::vector<double> FlowModel::normalize_x0(const std::vector<double> &x0) const {
  std::vector<double> out(size_t(cfg.n));
  for (int j = 0; j < cfg.n; ++j) out[j] = (x0[j] - norm_mean[j]) / norm_std[j];
  return out;
}

Tensor FlowModel::velocity(const Tensor &xt, const Tensor &x0n, const Tensor &z,
                           const std::vector<double> &ts) const {
  const int B = xt.rows();
  std::vector<double> emb(size_t(B) * cfg.time_embed_dim);
  for (int i = 0; i < B; ++i) {
    auto e = time_embedding(ts[i], cfg.time_embed_dim);
    std::copy(e.begin(), e.end(), emb.begin() + size_t(i) * cfg.time_embed_dim);
  }
  Tensor temb = Tensor::from_values(B, cfg.time_embed_dim, std::move(emb));
  return net.forward(concat_cols({xt, x0n, z, temb}));
}

Tensor flow_loss(const FlowModel &model, const std::vector<const SpecGraph *> &graphs,
                 const std::vector<const Trajectory *> &trajs, Rng &rng) {
  if (graphs.size() != trajs.size() || graphs.empty())
    throw std::invalid_argument("flow_loss: mismatched or empty batch");
  const int B = static_cast<int>(graphs.size());
  const int D = model.traj_dim();
  const int Ns = model.cfg.ode_steps;

  std::vector<Tensor> zs;
  zs.reserve(graphs.size());
  for (const auto *g : graphs) zs.push_back(model.encoder.encode(*g));
  Tensor z = concat_rows(zs);

  std::vector<double> xt(size_t(B) * D), target(size_t(B) * D);
  std::vector<double> x0n(size_t(B) * model.cfg.n);
  std::vector<double> ts(static_cast<size_t>(B));
  for (int i = 0; i < B; ++i) {
    double t = double(uniform_int(rng, 0, Ns)) / Ns;
    ts[i] = t;
    auto x1 = model.flatten(*trajs[i]);
    for (int j = 0; j < D; ++j) {
      double noise = gaussian(rng, 0.0, 1.0);
      xt[size_t(i) * D + j] = noise + t * (x1[j] - noise);
      target[size_t(i) * D + j] = x1[j] - noise;
    }
    const double *s0 = trajs[i]->states.row(0);
    auto start = model.normalize_x0(std::vector<double>(s0, s0 + model.cfg.n));
    std::copy(start.begin(), start.end(), x0n.begin() + size_t(i) * model.cfg.n);
  }

  Tensor pred = model.velocity(Tensor::from_values(B, D, std::move(xt)),
                               Tensor::from_values(B, model.cfg.n, std::move(x0n)), z,
                               ts);
  return mse(pred, Tensor::from_values(B, D, std::move(target)));
}

std::vector<Trajectory> sample(const FlowModel &model, const SpecGraph &graph,
                               const std::vector<double> &x0, int count, int ode_steps,
                               Rng &rng) {
  if (ode_steps < 1) throw std::invalid_argument("ode_steps must be >= 1");
  const int D = model.traj_dim();

  Tensor z1 = model.encoder.encode(graph);
  std::vector<double> zrep(size_t(count) * z1.cols());
  for (int i = 0; i < count; ++i)
    std::copy(z1.data().begin(), z1.data().end(), zrep.begin() + size_t(i) * z1.cols());
  Tensor z = Tensor::from_values(count, z1.cols(), std::move(zrep));

  auto start = model.normalize_x0(x0);
  std::vector<double> x0rep(size_t(count) * model.cfg.n);
  for (int i = 0; i < count; ++i)
    std::copy(start.begin(), start.end(), x0rep.begin() + size_t(i) * model.cfg.n);
  Tensor x0n = Tensor::from_values(count, model.cfg.n, std::move(x0rep));

  std::vector<double> x(size_t(count) * D);
  for (auto &v : x) v = gaussian(rng, 0.0, 1.0);

  for (int step = 0; step < ode_steps; ++step) {
    std::vector<double> ts(size_t(count), double(step) / ode_steps);
    Tensor v = model.velocity(Tensor::from_values(count, D, x), x0n, z, ts);
    for (size_t j = 0; j < x.size(); ++j) x[j] += v.data()[j] / ode_steps;
  }

  std::vector<Trajectory> out;
  out.reserve(size_t(count));
  for (int i = 0; i < count; ++i) {
    std::vector<double> flat(x.begin() + size_t(i) * D, x.begin() + size_t(i + 1) * D);
    out.push_back(model.unflatten(flat, x0));
  }
  return out;
}

BestOf best_of(const std::vector<Trajectory> &candidates, const StlPtr &spec) {
  BestOf best;
  for (size_t i = 0; i < candidates.size(); ++i) {
    double rho = robustness(candidates[i], 0, spec);
    if (best.index < 0 || rho > best.robustness) {
      best.index = static_cast<int>(i);
      best.robustness = rho;
    }
  }
  return best;
}

}  // namespace stlflow::nn
