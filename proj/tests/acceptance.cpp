// Acceptance gate: eight criteria, one PASS/FAIL line each. Exit code is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "stlflow/data/generate.hpp"
#include "stlflow/eval/evaluate.hpp"
#include "stlflow/graph/spec_graph.hpp"
#include "stlflow/nn/train.hpp"
#include "stlflow/stl/smooth.hpp"

using namespace stlflow;
using namespace testutil;
using Clock = std::chrono::steady_clock;

namespace {

double secs(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int idx, const char *name, bool ok, const std::string &detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", idx, name,
              detail.c_str());
  std::fflush(stdout);
  return ok;
}

// ---------------------------------------------------------------- criterion 1

bool criterion1() {
  auto t0 = Clock::now();
  Rng rng(101);
  int nonzero = 0, agree = 0;
  for (int i = 0; i < 1000; ++i) {
    int T = uniform_int(rng, 1, 12);
    Trajectory s = random_traj(rng, T);
    StlPtr phi = random_spec(rng, uniform_int(rng, 0, 4), T);
    double rho = robustness(s, 0, phi);
    bool sat = eval_bool(s, 0, phi);
    if (rho != 0.0) {
      ++nonzero;
      if ((rho > 0.0) == sat) ++agree;
    }
  }
  double dt = secs(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d/%d sign agreements, %.2fs", agree, nonzero, dt);
  return report(1, "semantics oracle", agree == nonzero && dt < 10.0, buf);
}

// ---------------------------------------------------------------- criterion 2

bool grad_suite_smooth(int &cases, double &worst) {
  Rng rng(202);
  SmoothConfig cfg;
  while (cases < 50) {
    int T = uniform_int(rng, 2, 8);
    Trajectory s = random_traj(rng, T);
    StlPtr phi = random_spec(rng, uniform_int(rng, 1, 3), T);
    auto res = smooth_robustness(s, 0, phi, cfg);
    int row = uniform_int(rng, 0, T), col = uniform_int(rng, 0, 1);
    Trajectory sp = s, sm = s;
    sp.states(row, col) += 1e-5;
    sm.states(row, col) -= 1e-5;
    double fd = (smooth_robustness(sp, 0, phi, cfg).value -
                 smooth_robustness(sm, 0, phi, cfg).value) /
                2e-5;
    double an = res.state_grad(row, col);
    if (std::fabs(fd) < 1e-7 && std::fabs(an) < 1e-7) continue;
    worst = std::max(worst, rel_err(an, fd));
    ++cases;
  }
  return worst <= 1e-4;
}

bool grad_suite_rollout(int &cases, double &worst) {
  Rng rng(203);
  for (const EnvModel &env : {EnvModel::linear(), EnvModel::dubins()}) {
    int env_cases = 0;
    while (env_cases < 50) {
      int T = 6;
      Mat controls(T, env.m);
      for (auto &v : controls.v) v = uniform(rng, -0.9, 0.9);
      std::vector<double> x0(size_t(env.n));
      for (auto &v : x0) v = uniform(rng, -1.0, 1.0);
      Mat weights(T + 1, env.n);
      for (auto &v : weights.v) v = uniform(rng, -1.0, 1.0);
      auto scalar = [&](const Mat &ctrl) {
        Trajectory t = env.rollout(x0, ctrl);
        double acc = 0;
        for (size_t i = 0; i < t.states.v.size(); ++i)
          acc += weights.v[i] * t.states.v[i];
        return acc;
      };
      Mat g = env.rollout_grad(x0, controls, weights);
      int k = uniform_int(rng, 0, T - 1), j = uniform_int(rng, 0, env.m - 1);
      Mat cp = controls, cm = controls;
      cp(k, j) += 1e-5;
      cm(k, j) -= 1e-5;
      double fd = (scalar(cp) - scalar(cm)) / 2e-5;
      if (std::fabs(fd) < 1e-9 && std::fabs(g(k, j)) < 1e-9) continue;
      worst = std::max(worst, rel_err(g(k, j), fd));
      ++env_cases;
      ++cases;
    }
  }
  return worst <= 1e-4;
}

bool grad_suite_nn(int &cases, double &worst) {
  Rng rng(204);
  nn::FlowConfig fc;
  fc.T = 3;
  fc.n = 2;
  fc.m = 1;
  fc.hidden = {5};
  fc.gcn.layers = 2;
  fc.gcn.hidden = 4;
  fc.gcn.out_dim = 3;
  nn::FlowModel model(fc, rng);
  Trajectory tau;
  tau.dt = 0.5;
  tau.states = Mat(4, 2);
  tau.controls = Mat(3, 1);
  for (auto &v : tau.states.v) v = gaussian(rng);
  for (auto &v : tau.controls.v) v = gaussian(rng);
  SpecGraph g = to_graph(random_spec(rng, 2, 3));

  while (cases < 50) {
    uint64_t noise_seed = 5000 + cases;
    auto forward = [&]() {
      Rng fixed(noise_seed);
      return nn::flow_loss(model, {&g}, {&tau}, fixed);
    };
    nn::Tensor loss = forward();
    loss.backward();
    auto params = model.params();
    nn::Tensor p =
        params[size_t(uniform_int(rng, 0, static_cast<int>(params.size()) - 1))];
    size_t idx = size_t(uniform_int(rng, 0, static_cast<int>(p.data().size()) - 1));
    double an = p.grad().size() == p.data().size() ? p.grad()[idx] : 0.0;
    double orig = p.data()[idx];
    p.data()[idx] = orig + 1e-6;
    double up = forward().at(0, 0);
    p.data()[idx] = orig - 1e-6;
    double dn = forward().at(0, 0);
    p.data()[idx] = orig;
    double fd = (up - dn) / 2e-6;
    for (auto &q : model.params()) q.zero_grad();
    if (std::fabs(fd) < 1e-8 && std::fabs(an) < 1e-8) continue;
    worst = std::max(worst, rel_err(an, fd));
    ++cases;
  }
  return worst <= 1e-4;
}

bool criterion2() {
  int c1 = 0, c2 = 0, c3 = 0;
  double w1 = 0, w2 = 0, w3 = 0;
  bool ok1 = grad_suite_smooth(c1, w1);
  bool ok2 = grad_suite_rollout(c2, w2);
  bool ok3 = grad_suite_nn(c3, w3);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "smooth %d cases worst %.2e; rollout %d worst %.2e; nn %d worst %.2e",
                c1, w1, c2, w2, c3, w3);
  return report(2, "gradient suites vs finite differences", ok1 && ok2 && ok3, buf);
}

// ---------------------------------------------------------------- criterion 3

bool criterion3() {
  Rng rng(303);
  int identical = 0;
  for (int i = 0; i < 200; ++i) {
    int T = uniform_int(rng, 1, 12);
    Trajectory s = random_traj(rng, T);
    StlPtr phi = random_spec(rng, uniform_int(rng, 1, 4), T);
    int k = uniform_int(rng, 0, 6);
    StlPtr aug = augment_duplicate_children(phi, k, rng);
    if (robustness(s, 0, aug) == robustness(s, 0, phi)) ++identical;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d/200 bit-identical", identical);
  return report(3, "augmentation invariance", identical == 200, buf);
}

// ---------------------------------------------------------------- criterion 4

std::vector<std::pair<StlPtr, SceneSpec>> planner_suite(int count) {
  EnvModel env = EnvModel::linear();
  std::vector<std::pair<StlPtr, SceneSpec>> suite;
  uint64_t seed = 4000;
  while (static_cast<int>(suite.size()) < count) {
    Rng rng(seed++);
    try {
      SceneSpec scene = place_scene(env, 1, uniform_int(rng, 0, 3), rng);
      StlPtr phi = sample_spec(TemplateId::Single, scene, rng, env.T);
      suite.emplace_back(std::move(phi), std::move(scene));
    } catch (const PlacementFailed &) {
    }
  }
  return suite;
}

bool criterion4() {
  auto t0 = Clock::now();
  EnvModel env = EnvModel::linear();
  auto suite = planner_suite(100);

  GradConfig grad_cfg;          // iters=50, restarts=8
  GradConfig lite_cfg = GradConfig::lite();
  CemConfig cem_cfg;            // 25/64/100

  int grad_ok = 0, lite_ok = 0, cem_ok = 0, lite_beats = 0;
  for (size_t i = 0; i < suite.size(); ++i) {
    const auto &[phi, scene] = suite[i];
    Rng r1(9000 + i), r2(9000 + i), r3(9000 + i);
    double g = grad_plan(env, scene.agent_init, phi, grad_cfg, r1).robustness;
    double l = grad_plan(env, scene.agent_init, phi, lite_cfg, r2).robustness;
    double c = cem_plan(env, scene.agent_init, phi, cem_cfg, r3).robustness;
    grad_ok += g >= 0;
    lite_ok += l >= 0;
    cem_ok += c >= 0;
    lite_beats += l >= 0 && g < 0;
  }
  double dt = secs(t0);
  bool ok = grad_ok >= 90 && cem_ok >= 80 && grad_ok >= lite_ok && dt < 300.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "grad %d/100, grad-lite %d/100, cem %d/100, lite-only wins %d, %.1fs",
                grad_ok, lite_ok, cem_ok, lite_beats, dt);
  return report(4, "classical planners on the 100-spec suite", ok, buf);
}

// ------------------------------------------------------- criteria 5 and 6

struct ToyExperiment {
  EnvModel env = EnvModel::linear();
  Dataset train, val;
  nn::FlowModel trained, untrained;
  double train_seconds = 0;
  bool generated = false;
};

GenerateConfig dense_config() {
  // dense scenes so an untrained model's noise violates the avoid constraint
  GenerateConfig gc;
  gc.demos = 2;
  gc.obstacles_lo = 5;
  gc.obstacles_hi = 6;
  gc.limits.obstacle_extent_lo = 0.65;
  gc.limits.obstacle_extent_hi = 0.95;
  gc.limits.goal_extent_lo = 0.4;
  gc.limits.goal_extent_hi = 0.7;
  gc.collect.grad.iters = 30;
  gc.collect.grad.restarts = 4;
  return gc;
}

double satisfaction_best_of(const nn::FlowModel &model, const Dataset &split,
                            int K, int ode_steps, uint64_t seed) {
  int sat = 0;
  for (size_t i = 0; i < split.records.size(); ++i) {
    const auto &rec = split.records[i];
    Rng rng(seed + i);
    auto samples =
        nn::sample(model, to_graph(rec.spec), rec.scene.agent_init, K, ode_steps, rng);
    if (nn::best_of(samples, rec.spec).robustness >= 0.0) ++sat;
  }
  return double(sat) / split.records.size();
}

bool build_toy(ToyExperiment &toy) {
  Rng rng(505);
  Dataset full = generate_dataset(toy.env, TemplateId::Single, 500, rng, dense_config());
  std::tie(toy.train, toy.val) = split_dataset(full, 0.8, 42);

  nn::FlowConfig fc;
  fc.T = toy.env.T;
  fc.n = toy.env.n;
  fc.m = toy.env.m;
  fc.dt = toy.env.dt;
  fc.gcn.time_scale = toy.env.T;
  fc.gcn.coord_scale = toy.env.workspace.half_extent();
  fc.ode_steps = 10;
  fc.hidden = {640, 640};

  Rng mrng(506);
  toy.trained = nn::FlowModel(fc, mrng);
  Rng urng(507);
  toy.untrained = nn::FlowModel(fc, urng);

  std::vector<SpecGraph> graphs;
  std::vector<Trajectory> trajs;
  for (const auto &rec : toy.train.records) {
    SpecGraph g = to_graph(rec.spec);
    for (const auto &t : rec.trajectories) {
      graphs.push_back(g);
      trajs.push_back(t);
    }
  }

  nn::TrainConfig tc;
  tc.epochs = 900;
  tc.lr = 2e-3;
  tc.lr_min = 2e-4;
  auto t0 = Clock::now();
  Rng trng(508);
  nn::train(toy.trained, graphs, trajs, tc, trng);
  toy.train_seconds = secs(t0);

  // baseline shares the normalization statistics but no training
  nn::fit_normalization(toy.untrained, trajs);
  toy.generated = true;
  return true;
}

bool criterion5(ToyExperiment &toy) {
  build_toy(toy);
  double train_sat = satisfaction_best_of(toy.trained, toy.train, 64, 10, 51000);
  double base_train = satisfaction_best_of(toy.untrained, toy.train, 64, 10, 52000);
  double base_val = satisfaction_best_of(toy.untrained, toy.val, 64, 10, 53000);
  bool ok = toy.train_seconds <= 1800.0 && train_sat >= 0.60 &&
            train_sat > base_train && base_train < 0.10 && base_val < 0.10;
  char buf[160];
  std::snprintf(
      buf, sizeof(buf),
      "train %.0fs, best-of-64 train %.3f, untrained train %.3f / val %.3f",
      toy.train_seconds, train_sat, base_train, base_val);
  return report(5, "toy flow model", ok, buf);
}

bool criterion6(const ToyExperiment &toy) {
  if (!toy.generated) return report(6, "ODE-step ablation", false, "toy model missing");
  EvalConfig cfg;
  cfg.K = 64;
  cfg.seed = 606;
  std::vector<int> steps = {1, 2, 3, 5, 10, 25, 50, 100};
  auto rows = ablate_ode_steps(toy.trained, toy.train, toy.env, steps, cfg);

  std::vector<double> xs, ys;
  double sat10 = 0, sat100 = 0;
  for (const auto &r : rows) {
    xs.push_back(r.steps);
    ys.push_back(r.mean_seconds);
    if (r.steps == 10) sat10 = r.satisfaction;
    if (r.steps == 100) sat100 = r.satisfaction;
  }
  double r = pearson(xs, ys);
  bool ok = r >= 0.95 && std::fabs(sat10 - sat100) <= 0.05;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "pearson %.4f, sat@10 %.3f vs sat@100 %.3f", r, sat10,
                sat100);
  return report(6, "ODE-step ablation shape", ok, buf);
}

// ---------------------------------------------------------------- criterion 7

int count_kind(const StlPtr &phi, Kind k) {
  int n = phi->kind == k ? 1 : 0;
  for (const auto &c : phi->children) n += count_kind(c, k);
  return n;
}

int count_reach(const StlPtr &phi) {
  int n = phi->kind == Kind::Ap && phi->pred.polarity == Polarity::Reach ? 1 : 0;
  for (const auto &c : phi->children) n += count_reach(c);
  return n;
}

bool conforms(const DatasetRecord &rec) {
  switch (rec.template_id) {
    case TemplateId::Single:
      return count_reach(rec.spec) == 1;
    case TemplateId::Sequential:
      return count_kind(rec.spec, Kind::Or) == 0;
    case TemplateId::Partial:
      return count_kind(rec.spec, Kind::Until) >= 1;
    case TemplateId::Multi:
      return count_reach(rec.spec) >= 1;
  }
  return false;
}

bool criterion7() {
  EnvModel env = EnvModel::linear();
  Rng rng(707);
  GenerateConfig gc;
  gc.demos = 1;
  gc.collect.grad.iters = 25;
  gc.collect.grad.restarts = 4;
  gc.obstacles_hi = 3;

  Dataset ds;
  ds.env_name = env.name();
  for (TemplateId id : {TemplateId::Single, TemplateId::Multi, TemplateId::Sequential,
                        TemplateId::Partial}) {
    Dataset part = generate_dataset(env, id, 25, rng, gc);
    for (auto &rec : part.records) ds.records.push_back(std::move(rec));
  }

  auto dir = std::filesystem::temp_directory_path();
  std::string p1 = (dir / "acceptance_corpus.jsonl").string();
  std::string p2 = (dir / "acceptance_corpus2.jsonl").string();
  write_dataset(ds, p1);
  Dataset loaded = read_dataset(p1);
  write_dataset(loaded, p2);

  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::string b1((std::istreambuf_iterator<char>(f1)), {});
  std::string b2((std::istreambuf_iterator<char>(f2)), {});
  bool bytes_ok = !b1.empty() && b1 == b2;

  int verified = 0, conforming = 0;
  for (const auto &rec : loaded.records) {
    if (verify_record(rec)) ++verified;
    if (conforms(rec)) ++conforming;
  }
  bool ok = bytes_ok && verified == 100 && conforming == 100;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "verified %d/100, conforming %d/100, round-trip %s",
                verified, conforming, bytes_ok ? "byte-identical" : "DIFFERS");
  return report(7, "dataset integrity", ok, buf);
}

// ---------------------------------------------------------------- criterion 8

bool criterion8() {
  Rng rng(808);
  // exact permutation invariance
  int exact = 0;
  nn::GcnConfig gcfg;
  nn::GcnEncoder enc(gcfg, rng);
  for (int i = 0; i < 100; ++i) {
    StlPtr A = random_spec(rng, 1, 20);
    StlPtr B = random_spec(rng, 1, 20);
    StlPtr C = random_spec(rng, 1, 20);
    bool use_or = uniform_int(rng, 0, 1) == 1;
    StlPtr p1 = use_or ? StlExpr::disj({A, B, C}) : StlExpr::conj({A, B, C});
    StlPtr p2 = use_or ? StlExpr::disj({C, B, A}) : StlExpr::conj({C, B, A});
    nn::Tensor z1 = enc.encode(to_graph(p1));
    nn::Tensor z2 = enc.encode(to_graph(p2));
    if (z1.data() == z2.data()) ++exact;
  }

  // WL separation under fresh random parameters
  int separated = 0, trials = 0;
  while (trials < 100) {
    StlPtr p1 = random_spec(rng, uniform_int(rng, 1, 3), 20);
    StlPtr p2 = random_spec(rng, uniform_int(rng, 1, 3), 20);
    if (!graph_distinguishable(p1, p2)) continue;
    ++trials;
    nn::GcnEncoder fresh(gcfg, rng);
    nn::Tensor z1 = fresh.encode(to_graph(p1));
    nn::Tensor z2 = fresh.encode(to_graph(p2));
    double diff = 0;
    for (int c = 0; c < z1.cols(); ++c) diff += std::fabs(z1.at(0, c) - z2.at(0, c));
    if (diff > 1e-9) ++separated;
  }
  bool ok = exact == 100 && separated >= 99;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "permutation exact %d/100, WL separated %d/100",
                exact, separated);
  return report(8, "encoder properties", ok, buf);
}

}  // namespace

int main() {
  int failures = 0;
  failures += !criterion1();
  failures += !criterion2();
  failures += !criterion3();
  failures += !criterion4();
  ToyExperiment toy;
  failures += !criterion5(toy);
  failures += !criterion6(toy);
  failures += !criterion7();
  failures += !criterion8();
  std::printf("%d/8 criteria passed\n", 8 - failures);
  return failures;
}
