#include "stlflow/data/collect.hpp"

#include <algorithm>

namespace stlflow {

namespace {

std::vector<double> respawn(const EnvModel &env, const SceneSpec &scene, Rng &rng) {
  const Workspace &ws = env.workspace;
  std::vector<Predicate> all = scene.goals;
  all.insert(all.end(), scene.obstacles.begin(), scene.obstacles.end());
  for (int tries = 0; tries < 1000; ++tries) {
    double x = uniform(rng, ws.xmin, ws.xmax);
    double y = uniform(rng, ws.ymin, ws.ymax);
    bool clear = true;
    for (const auto &o : all) {
      double dx = x - o.center[0], dy = y - o.center[1];
      if (std::sqrt(dx * dx + dy * dy) < o.extent + 0.1) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    std::vector<double> x0{x, y};
    if (env.kind == EnvKind::Dubins) {
      x0.push_back(uniform(rng, -M_PI, M_PI));
      x0.push_back(uniform(rng, 0.0, 1.0));
    }
    return x0;
  }
  return scene.agent_init;
}

void collect_reach_predicates(const StlPtr &spec, std::vector<Predicate> &out) {
  if (spec->kind == Kind::Ap && spec->pred.polarity == Polarity::Reach) {
    for (const auto &p : out)
      if (p == spec->pred) return;
    out.push_back(spec->pred);
    return;
  }
  for (const auto &c : spec->children) collect_reach_predicates(c, out);
}

std::vector<Trajectory> collect_maze(const EnvModel &env, const StlPtr &spec,
                                     const SceneSpec &scene, int k, Rng &rng,
                                     const CollectConfig &cfg) {
  std::vector<Predicate> reach;
  collect_reach_predicates(spec, reach);
  std::vector<std::array<int, 2>> goal_cells;
  for (const auto &p : reach)
    goal_cells.push_back(env.maze.cell_of(p.center[0], p.center[1]));
  auto start = env.maze.cell_of(scene.agent_init[0], scene.agent_init[1]);

  std::vector<Trajectory> out;
  for (int attempt = 0; attempt < k && static_cast<int>(out.size()) < k; ++attempt) {
    auto cells = goal_cells;
    if (attempt > 0)  // vary the visit order on retries
      for (size_t i = cells.size(); i > 1; --i)
        std::swap(cells[i - 1], cells[uniform_int(rng, 0, static_cast<int>(i) - 1)]);
    try {
      auto waypoints = astar_plan(env.maze, start, cells);
      Trajectory tau = track_waypoints(env, scene.agent_init, waypoints, cfg.gains);
      if (robustness(tau, 0, spec) >= 0.0) out.push_back(std::move(tau));
    } catch (const UnreachableError &) {
      // skip this ordering
    }
  }
  return out;
}

}  // namespace

std::vector<Trajectory> collect_demo(const EnvModel &env, const StlPtr &spec,
                                     const SceneSpec &scene, Solver solver, int k,
                                     Rng &rng, const CollectConfig &cfg) {
  if (solver == Solver::AstarTrack) {
    if (env.kind != EnvKind::GridMaze)
      throw std::invalid_argument("AstarTrack solver requires the GridMaze env");
    return collect_maze(env, spec, scene, k, rng, cfg);
  }
  if (env.kind == EnvKind::GridMaze)
    throw std::invalid_argument("Grad/Cem solvers target Linear/Dubins envs");

  std::vector<Trajectory> out;
  for (int attempt = 0; attempt < k; ++attempt) {
    std::vector<double> x0 = attempt == 0 ? scene.agent_init : respawn(env, scene, rng);
    PlanResult res = solver == Solver::Grad
                         ? grad_plan(env, x0, spec, cfg.grad, rng)
                         : cem_plan(env, x0, spec, cfg.cem, rng);
    if (res.robustness >= 0.0) out.push_back(std::move(res.trajectory));
  }
  return out;
}

namespace {

struct IntervalSampler {
  const Trajectory &tau;
  Rng &rng;
  int T;

  bool placeholder(const StlExpr *n) const {
    return n->kind == Kind::Eventually && n->a == 0 && n->b >= T;
  }

  StlPtr rewrite(const StlPtr &node, int est_t, bool &possible) {
    if (placeholder(node.get())) {
      std::vector<int> sat;
      for (int t = est_t; t <= T; ++t)
        if (eval_bool(tau, t, node->children[0])) sat.push_back(t);
      if (sat.empty()) {
        possible = false;
        return node;
      }
      int t_star = sat[uniform_int(rng, 0, static_cast<int>(sat.size()) - 1)];
      int rel = t_star - est_t;
      int ta = uniform_int(rng, 0, rel);
      int tb = uniform_int(rng, rel, T - est_t);
      StlPtr child = rewrite(node->children[0], t_star, possible);
      return StlExpr::eventually(ta, tb, std::move(child));
    }
    if (node->children.empty()) return node;
    auto copy = std::make_shared<StlExpr>(node->kind);
    copy->a = node->a;
    copy->b = node->b;
    copy->pred = node->pred;
    for (const auto &c : node->children)
      copy->children.push_back(rewrite(c, est_t, possible));
    return copy;
  }
};

}  // namespace

StlPtr infer_intervals(const StlPtr &skeleton, const Trajectory &tau, Rng &rng) {
  IntervalSampler sampler{tau, rng, tau.horizon()};
  for (int attempt = 0; attempt < 100; ++attempt) {
    bool possible = true;
    StlPtr candidate = sampler.rewrite(skeleton, 0, possible);
    if (!possible)
      throw InferenceFailed("a goal subformula never holds along the trajectory");
    if (robustness(tau, 0, candidate) >= 0.0) return candidate;
  }
  throw InferenceFailed("no sampled interval assignment verified in 100 attempts");
}

}  // namespace stlflow
