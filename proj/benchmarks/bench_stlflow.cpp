#include <benchmark/benchmark.h>

#include "stlflow/env/env.hpp"
#include "stlflow/graph/spec_graph.hpp"
#include "stlflow/nn/flow.hpp"
#include "stlflow/nn/gcn.hpp"
#include "stlflow/stl/parse.hpp"
#include "stlflow/stl/semantics.hpp"
#include "stlflow/stl/smooth.hpp"

using namespace stlflow;

namespace {

Trajectory make_traj(int T) {
  EnvModel env = EnvModel::linear();
  Rng rng(7);
  Mat controls(T, env.m);
  for (auto &v : controls.v) v = uniform(rng, -1.0, 1.0);
  return env.rollout({0.0, 0.0}, controls);
}

StlPtr make_spec() {
  return parse(
      "F[0,32] circle(2,3,0.5) & G[0,64] ~circle(-1,0,1) & "
      "circle(0,0,4) U[0,48] circle(-3,-3,0.7)");
}

void bm_robustness(benchmark::State &state) {
  Trajectory tau = make_traj(64);
  StlPtr phi = make_spec();
  for (auto _ : state) benchmark::DoNotOptimize(robustness(tau, 0, phi));
}
BENCHMARK(bm_robustness);

void bm_smooth_robustness_grad(benchmark::State &state) {
  Trajectory tau = make_traj(64);
  StlPtr phi = make_spec();
  SmoothConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(smooth_robustness(tau, 0, phi, cfg));
}
BENCHMARK(bm_smooth_robustness_grad);

void bm_gcn_encode(benchmark::State &state) {
  SpecGraph g = to_graph(make_spec());
  Rng rng(11);
  nn::GcnConfig cfg;
  nn::GcnEncoder enc(cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(enc.encode(g));
}
BENCHMARK(bm_gcn_encode);

void bm_euler_sample(benchmark::State &state) {
  Rng rng(13);
  nn::FlowConfig fc;
  nn::FlowModel model(fc, rng);
  SpecGraph g = to_graph(make_spec());
  std::vector<double> x0 = {0.0, 0.0};
  int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Rng sr(17);
    benchmark::DoNotOptimize(nn::sample(model, g, x0, 1, steps, sr));
  }
}
BENCHMARK(bm_euler_sample)->Arg(1)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
