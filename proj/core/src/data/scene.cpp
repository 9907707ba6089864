#include "stlflow/data/scene.hpp"

#include <cmath>

#include "stlflow/stl/json.hpp"

namespace stlflow {

nlohmann::json SceneSpec::to_json() const {
  nlohmann::json goals_j = nlohmann::json::array();
  for (const auto &g : goals) goals_j.push_back(predicate_to_json(g));
  nlohmann::json obs_j = nlohmann::json::array();
  for (const auto &o : obstacles) obs_j.push_back(predicate_to_json(o));
  return {{"goals", goals_j},
          {"obstacles", obs_j},
          {"agent_init", agent_init},
          {"env", env_name}};
}

SceneSpec SceneSpec::from_json(const nlohmann::json &j) {
  SceneSpec s;
  for (const auto &g : j.at("goals")) s.goals.push_back(predicate_from_json(g));
  for (const auto &o : j.at("obstacles")) s.obstacles.push_back(predicate_from_json(o));
  s.agent_init = j.at("agent_init").get<std::vector<double>>();
  s.env_name = j.at("env").get<std::string>();
  return s;
}

namespace {

double center_dist(const Predicate &a, const Predicate &b) {
  double dx = a.center[0] - b.center[0];
  double dy = a.center[1] - b.center[1];
  return std::sqrt(dx * dx + dy * dy);
}

bool clear_of_all(const Predicate &p, const std::vector<Predicate> &placed,
                  double clearance) {
  for (const auto &q : placed)
    if (center_dist(p, q) < p.extent + q.extent + clearance) return false;
  return true;
}

bool agent_clear(const double *pos, const std::vector<Predicate> &objects,
                 double margin) {
  for (const auto &o : objects) {
    double dx = pos[0] - o.center[0], dy = pos[1] - o.center[1];
    if (std::sqrt(dx * dx + dy * dy) < o.extent + margin) return false;
  }
  return true;
}

SceneSpec place_continuous(const EnvModel &env, int n_goals, int n_obstacles,
                           Rng &rng, const PlacementLimits &limits) {
  const Workspace &ws = env.workspace;
  SceneSpec scene;
  scene.env_name = env.name();
  std::vector<Predicate> placed;
  int rejections = 0;
  auto sample_object = [&](double lo, double hi, Polarity pol) {
    while (true) {
      Predicate p;
      p.shape = Shape::Circle;
      p.extent = uniform(rng, lo, hi);
      p.center = {uniform(rng, ws.xmin + p.extent, ws.xmax - p.extent),
                  uniform(rng, ws.ymin + p.extent, ws.ymax - p.extent), 0.0};
      p.polarity = pol;
      if (clear_of_all(p, placed, limits.clearance)) {
        placed.push_back(p);
        return p;
      }
      if (++rejections > limits.max_rejections)
        throw PlacementFailed("object placement exceeded rejection budget");
    }
  };
  for (int i = 0; i < n_goals; ++i)
    scene.goals.push_back(
        sample_object(limits.goal_extent_lo, limits.goal_extent_hi, Polarity::Reach));
  for (int i = 0; i < n_obstacles; ++i)
    scene.obstacles.push_back(sample_object(limits.obstacle_extent_lo,
                                            limits.obstacle_extent_hi, Polarity::Avoid));
  while (true) {
    double pos[2] = {uniform(rng, ws.xmin, ws.xmax), uniform(rng, ws.ymin, ws.ymax)};
    if (agent_clear(pos, placed, limits.clearance)) {
      scene.agent_init = {pos[0], pos[1]};
      if (env.kind == EnvKind::Dubins) {
        scene.agent_init.push_back(uniform(rng, -M_PI, M_PI));  // heading
        scene.agent_init.push_back(uniform(rng, 0.0, 1.0));     // speed
      }
      return scene;
    }
    if (++rejections > limits.max_rejections)
      throw PlacementFailed("agent placement exceeded rejection budget");
  }
}

SceneSpec place_maze(const EnvModel &env, int n_goals, int n_obstacles, Rng &rng,
                     const PlacementLimits &limits) {
  const MazeLayout &maze = env.maze;
  std::vector<std::array<int, 2>> free_cells;
  for (int r = 0; r < maze.rows; ++r)
    for (int c = 0; c < maze.cols; ++c)
      if (!maze.occupied_at(r, c)) free_cells.push_back({r, c});
  if (static_cast<int>(free_cells.size()) < n_goals + n_obstacles + 1)
    throw PlacementFailed("maze has too few free cells");

  // shuffle free cells, take distinct tiles for goals, obstacles, agent
  for (size_t i = free_cells.size(); i > 1; --i)
    std::swap(free_cells[i - 1], free_cells[uniform_int(rng, 0, static_cast<int>(i) - 1)]);

  SceneSpec scene;
  scene.env_name = env.name();
  size_t idx = 0;
  auto tile = [&](Polarity pol) {
    auto [r, c] = free_cells[idx++];
    auto [x, y] = maze.cell_center(r, c);
    Predicate p;
    p.shape = Shape::Box;
    p.center = {x, y, 0.0};
    p.extent = maze.cell_size / 2;
    p.polarity = pol;
    return p;
  };
  for (int i = 0; i < n_goals; ++i) scene.goals.push_back(tile(Polarity::Reach));
  for (int i = 0; i < n_obstacles; ++i) scene.obstacles.push_back(tile(Polarity::Avoid));
  auto [r, c] = free_cells[idx];
  auto [x, y] = maze.cell_center(r, c);
  scene.agent_init = {x, y};
  (void)limits;
  return scene;
}

}  // namespace

SceneSpec place_scene(const EnvModel &env, int n_goals, int n_obstacles, Rng &rng,
                      const PlacementLimits &limits) {
  if (n_goals < 0 || n_goals > limits.max_goals || n_obstacles < 0 ||
      n_obstacles > limits.max_obstacles)
    throw std::invalid_argument("object counts outside placement limits");
  if (env.kind == EnvKind::GridMaze)
    return place_maze(env, n_goals, n_obstacles, rng, limits);
  return place_continuous(env, n_goals, n_obstacles, rng, limits);
}

bool scene_clearances_ok(const SceneSpec &scene, const EnvModel &env,
                         const PlacementLimits &limits) {
  std::vector<Predicate> all = scene.goals;
  all.insert(all.end(), scene.obstacles.begin(), scene.obstacles.end());
  if (env.kind == EnvKind::GridMaze) {
    // distinct tiles
    for (size_t i = 0; i < all.size(); ++i)
      for (size_t j = i + 1; j < all.size(); ++j)
        if (all[i].center == all[j].center) return false;
    return true;
  }
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      if (center_dist(all[i], all[j]) < all[i].extent + all[j].extent + limits.clearance)
        return false;
  return scene.agent_init.size() >= 2 &&
         agent_clear(scene.agent_init.data(), all, limits.clearance);
}

}  // namespace stlflow
