#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stlflow/data/generate.hpp"
#include "stlflow/eval/evaluate.hpp"
#include "stlflow/eval/plot.hpp"
#include "stlflow/graph/spec_graph.hpp"
#include "stlflow/nn/checkpoint.hpp"
#include "stlflow/nn/train.hpp"
#include "stlflow/stl/json.hpp"
#include "stlflow/stl/parse.hpp"
#include "stlflow/stl/semantics.hpp"
#include "stlflow/stl/smooth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stlflow;

namespace {

struct GlobalOpts {
  uint64_t seed = 0;
  std::string config_path;
  std::string out_dir = ".";
  json config = json::object();
};

json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return json::parse(in);
}

void write_text(const fs::path &path, const std::string &text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
}

template <typename T>
void maybe(const json &j, const char *key, T &slot) {
  if (j.contains(key)) slot = j.at(key).get<T>();
}

GradConfig grad_config(const json &cfg) {
  GradConfig g;
  if (!cfg.contains("grad")) return g;
  const json &j = cfg["grad"];
  maybe(j, "iters", g.iters);
  maybe(j, "lr", g.lr);
  maybe(j, "c1", g.c1);
  maybe(j, "c2", g.c2);
  maybe(j, "margin", g.margin);
  maybe(j, "restarts", g.restarts);
  maybe(j, "beta", g.beta);
  maybe(j, "init_std", g.init_std);
  return g;
}

CemConfig cem_config(const json &cfg) {
  CemConfig c;
  if (!cfg.contains("cem")) return c;
  const json &j = cfg["cem"];
  maybe(j, "population", c.population);
  maybe(j, "elite", c.elite);
  maybe(j, "iters", c.iters);
  maybe(j, "init_std", c.init_std);
  return c;
}

GenerateConfig generate_config(const json &cfg) {
  GenerateConfig g;
  g.collect.grad = grad_config(cfg);
  g.collect.cem = cem_config(cfg);
  if (cfg.contains("datagen")) {
    const json &j = cfg["datagen"];
    maybe(j, "demos", g.demos);
    maybe(j, "goals_lo", g.goals_lo);
    maybe(j, "goals_hi", g.goals_hi);
    maybe(j, "obstacles_lo", g.obstacles_lo);
    maybe(j, "obstacles_hi", g.obstacles_hi);
    maybe(j, "max_attempts", g.max_attempts);
    maybe(j, "obstacle_extent_lo", g.limits.obstacle_extent_lo);
    maybe(j, "obstacle_extent_hi", g.limits.obstacle_extent_hi);
    maybe(j, "goal_extent_lo", g.limits.goal_extent_lo);
    maybe(j, "goal_extent_hi", g.limits.goal_extent_hi);
  }
  return g;
}

nn::TrainConfig train_config(const json &cfg) {
  nn::TrainConfig t;
  if (!cfg.contains("train")) return t;
  const json &j = cfg["train"];
  maybe(j, "epochs", t.epochs);
  maybe(j, "batch", t.batch);
  maybe(j, "lr", t.lr);
  maybe(j, "lr_min", t.lr_min);
  maybe(j, "decay_frac", t.decay_frac);
  return t;
}

EvalConfig eval_config(const json &cfg, uint64_t seed) {
  EvalConfig e;
  e.grad = grad_config(cfg);
  e.cem = cem_config(cfg);
  e.seed = seed;
  if (cfg.contains("eval")) {
    const json &j = cfg["eval"];
    maybe(j, "K", e.K);
    maybe(j, "ode_steps", e.ode_steps);
  }
  return e;
}

EnvModel make_env(const std::string &name, const json &cfg) {
  if (name == "linear") return EnvModel::linear();
  if (name == "dubins") return EnvModel::dubins();
  if (name == "maze") {
    if (cfg.contains("maze_layout"))
      return EnvModel::grid_maze(MazeLayout::from_json(load_json_file(cfg["maze_layout"])));
    // default open 8x8 room with a few walls
    return EnvModel::grid_maze(MazeLayout::from_string(8, 8,
                                                       "........"
                                                       ".##....."
                                                       ".##..##."
                                                       ".....##."
                                                       "........"
                                                       "..##...."
                                                       "..##..#."
                                                       "........",
                                                       1.0, {-4.0, -4.0}));
  }
  throw CLI::ValidationError("--env", "unknown env: " + name);
}

Method method_from_name(const std::string &name) {
  if (name == "flow") return Method::Flow;
  if (name == "grad") return Method::Grad;
  if (name == "grad-lite") return Method::GradLite;
  if (name == "cem") return Method::Cem;
  throw CLI::ValidationError("--method", "unknown method: " + name);
}

Solver solver_from_name(const std::string &name) {
  if (name == "grad") return Solver::Grad;
  if (name == "cem") return Solver::Cem;
  if (name == "astar") return Solver::AstarTrack;
  throw CLI::ValidationError("--solver", "unknown solver: " + name);
}

std::pair<std::vector<SpecGraph>, std::vector<Trajectory>> flatten_dataset(
    const Dataset &ds) {
  std::vector<SpecGraph> graphs;
  std::vector<Trajectory> trajs;
  for (const auto &rec : ds.records) {
    SpecGraph g = to_graph(rec.spec);
    for (const auto &t : rec.trajectories) {
      graphs.push_back(g);
      trajs.push_back(t);
    }
  }
  return {std::move(graphs), std::move(trajs)};
}

EnvModel env_for_dataset(const Dataset &ds, const json &cfg) {
  std::string name = ds.env_name;
  if (name.rfind("maze", 0) == 0 || name.rfind("grid", 0) == 0) name = "maze";
  return make_env(name, cfg);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"STL-conditioned trajectory planning toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--out", g.out_dir, "output directory");

  // parse
  auto *cmd_parse = app.add_subcommand("parse", "parse a spec and print AST JSON");
  std::string spec_text;
  cmd_parse->add_option("--spec", spec_text, "STL formula text")->required();

  // eval-spec
  auto *cmd_eval_spec =
      app.add_subcommand("eval-spec", "robustness of a trajectory against a spec");
  std::string es_traj;
  int es_time = 0;
  bool es_smooth = false;
  double es_beta = 10.0;
  cmd_eval_spec->add_option("--spec", spec_text, "STL formula text")->required();
  cmd_eval_spec->add_option("--traj", es_traj, "trajectory JSON file")->required();
  cmd_eval_spec->add_option("--time", es_time, "evaluation step");
  cmd_eval_spec->add_flag("--smooth", es_smooth, "smooth semantics");
  cmd_eval_spec->add_option("--beta", es_beta, "smoothing temperature");

  // plan
  auto *cmd_plan = app.add_subcommand("plan", "classical planner for one spec");
  std::string pl_env = "linear", pl_method = "grad";
  std::vector<double> pl_x0;
  cmd_plan->add_option("--spec", spec_text, "STL formula text")->required();
  cmd_plan->add_option("--env", pl_env, "linear|dubins|maze");
  cmd_plan->add_option("--method", pl_method, "grad|grad-lite|cem");
  cmd_plan->add_option("--x0", pl_x0, "initial state");

  // gen-data
  auto *cmd_gen = app.add_subcommand("gen-data", "generate a dataset");
  std::string gd_env = "linear", gd_template = "single", gd_solver = "grad";
  int gd_count = 200;
  cmd_gen->add_option("--env", gd_env, "linear|dubins|maze");
  cmd_gen->add_option("--template", gd_template, "single|multi|sequential|partial");
  cmd_gen->add_option("--count", gd_count, "records to generate");
  cmd_gen->add_option("--solver", gd_solver, "grad|cem|astar");

  // train
  auto *cmd_train = app.add_subcommand("train", "train the flow model");
  std::string tr_data, tr_checkpoint;
  cmd_train->add_option("--data", tr_data, "dataset JSONL")->required();
  cmd_train->add_option("--checkpoint", tr_checkpoint, "resume from checkpoint");

  // sample
  auto *cmd_sample = app.add_subcommand("sample", "sample trajectories for one record");
  std::string sm_data, sm_checkpoint;
  int sm_index = 0, sm_count = 64, sm_steps = 0;
  cmd_sample->add_option("--checkpoint", sm_checkpoint)->required();
  cmd_sample->add_option("--data", sm_data, "dataset JSONL")->required();
  cmd_sample->add_option("--index", sm_index, "record index");
  cmd_sample->add_option("--count", sm_count, "samples");
  cmd_sample->add_option("--ode-steps", sm_steps, "Euler steps (0 = checkpoint default)");

  // evaluate
  auto *cmd_eval = app.add_subcommand("evaluate", "best-of-K evaluation report");
  std::string ev_data, ev_checkpoint, ev_method = "flow";
  cmd_eval->add_option("--data", ev_data, "dataset JSONL")->required();
  cmd_eval->add_option("--method", ev_method, "flow|grad|grad-lite|cem");
  cmd_eval->add_option("--checkpoint", ev_checkpoint, "flow checkpoint");

  // ablate-ode
  auto *cmd_ode = app.add_subcommand("ablate-ode", "runtime/satisfaction vs ODE steps");
  std::string od_data, od_checkpoint;
  std::vector<int> od_steps = {100, 50, 25, 10, 5, 3, 2, 1};
  cmd_ode->add_option("--data", od_data)->required();
  cmd_ode->add_option("--checkpoint", od_checkpoint)->required();
  cmd_ode->add_option("--steps", od_steps, "ODE step counts");

  // ablate-aug
  auto *cmd_aug = app.add_subcommand("ablate-aug", "satisfaction vs duplicated children");
  std::string ag_data, ag_checkpoint;
  std::vector<int> ag_counts = {0, 2, 4, 6};
  cmd_aug->add_option("--data", ag_data)->required();
  cmd_aug->add_option("--checkpoint", ag_checkpoint)->required();
  cmd_aug->add_option("--counts", ag_counts, "duplicate counts");

  // export-plot
  auto *cmd_plot = app.add_subcommand("export-plot", "scene + trajectory JSON/SVG");
  std::string xp_data, xp_checkpoint;
  int xp_index = 0, xp_count = 16;
  cmd_plot->add_option("--data", xp_data)->required();
  cmd_plot->add_option("--index", xp_index, "record index");
  cmd_plot->add_option("--checkpoint", xp_checkpoint, "sample from this model");
  cmd_plot->add_option("--count", xp_count, "samples when a checkpoint is given");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!g.config_path.empty()) g.config = load_json_file(g.config_path);
    fs::create_directories(g.out_dir);
    Rng rng(g.seed);

    if (*cmd_parse) {
      StlPtr spec = parse(spec_text);
      std::cout << unparse(spec) << '\n' << spec_to_json(spec).dump(2) << std::endl;
      return 0;
    }

    if (*cmd_eval_spec) {
      StlPtr spec = parse(spec_text);
      Trajectory traj = trajectory_from_json(load_json_file(es_traj));
      if (es_smooth) {
        SmoothConfig sc;
        sc.beta = es_beta;
        auto res = smooth_robustness(traj, es_time, spec, sc);
        std::cout << "smooth_robustness " << res.value << std::endl;
      } else {
        std::cout << "robustness " << robustness(traj, es_time, spec) << '\n'
                  << "satisfied " << (eval_bool(traj, es_time, spec) ? 1 : 0)
                  << std::endl;
      }
      return 0;
    }

    if (*cmd_plan) {
      EnvModel env = make_env(pl_env, g.config);
      StlPtr spec = parse(spec_text);
      std::vector<double> x0 = pl_x0;
      if (x0.empty()) x0.assign(size_t(env.n), 0.0);
      if (static_cast<int>(x0.size()) != env.n)
        throw std::runtime_error("--x0 must have " + std::to_string(env.n) + " entries");
      PlanResult res;
      if (pl_method == "cem")
        res = cem_plan(env, x0, spec, cem_config(g.config), rng);
      else {
        GradConfig gc = grad_config(g.config);
        if (pl_method == "grad-lite") gc.iters = GradConfig::lite().iters;
        res = grad_plan(env, x0, spec, gc, rng);
      }
      json out{{"robustness", res.robustness},
               {"trajectory", trajectory_to_json(res.trajectory)}};
      write_text(fs::path(g.out_dir) / "plan.json", out.dump(2) + "\n");
      std::cout << "robustness " << res.robustness << std::endl;
      return 0;
    }

    if (*cmd_gen) {
      EnvModel env = make_env(gd_env, g.config);
      GenerateConfig gc = generate_config(g.config);
      gc.solver = solver_from_name(gd_solver);
      if (env.kind == EnvKind::GridMaze) gc.solver = Solver::AstarTrack;
      Dataset ds = generate_dataset(env, template_from_name(gd_template), gd_count, rng, gc);
      std::string path = (fs::path(g.out_dir) / "dataset.jsonl").string();
      write_dataset(ds, path);
      std::cout << "wrote " << ds.records.size() << " records to " << path << std::endl;
      return 0;
    }

    if (*cmd_train) {
      Dataset ds = read_dataset(tr_data);
      EnvModel env = env_for_dataset(ds, g.config);
      nn::FlowModel model;
      if (!tr_checkpoint.empty()) {
        model = nn::load_checkpoint(tr_checkpoint);
      } else {
        nn::FlowConfig fc;
        fc.T = env.T;
        fc.n = env.n;
        fc.m = env.m;
        fc.dt = env.dt;
        fc.gcn.time_scale = env.T;
        fc.gcn.coord_scale = env.workspace.half_extent();
        model = nn::FlowModel(fc, rng);
        model.seed = g.seed;
      }
      auto [graphs, trajs] = flatten_dataset(ds);
      double loss = nn::train(model, graphs, trajs, train_config(g.config), rng,
                              [](int epoch, double l) {
                                std::cout << "epoch " << epoch << " loss " << l
                                          << std::endl;
                              });
      std::string path = (fs::path(g.out_dir) / "model.ckpt").string();
      nn::save_checkpoint(model, path);
      std::cout << "final loss " << loss << ", checkpoint " << path << std::endl;
      return 0;
    }

    if (*cmd_sample) {
      nn::FlowModel model = nn::load_checkpoint(sm_checkpoint);
      Dataset ds = read_dataset(sm_data);
      const auto &rec = ds.records.at(size_t(sm_index));
      int steps = sm_steps > 0 ? sm_steps : model.cfg.ode_steps;
      auto trajs = nn::sample(model, to_graph(rec.spec), rec.scene.agent_init, sm_count,
                              steps, rng);
      auto best = nn::best_of(trajs, rec.spec);
      json arr = json::array();
      for (const auto &t : trajs) arr.push_back(trajectory_to_json(t));
      json out{{"best_index", best.index},
               {"best_robustness", best.robustness},
               {"trajectories", arr}};
      write_text(fs::path(g.out_dir) / "samples.json", out.dump(2) + "\n");
      std::cout << "best robustness " << best.robustness << std::endl;
      return 0;
    }

    if (*cmd_eval) {
      Dataset ds = read_dataset(ev_data);
      EnvModel env = env_for_dataset(ds, g.config);
      Method method = method_from_name(ev_method);
      nn::FlowModel model;
      if (method == Method::Flow) {
        if (ev_checkpoint.empty())
          throw std::runtime_error("--checkpoint required for --method flow");
        model = nn::load_checkpoint(ev_checkpoint);
      }
      EvalReport rep = evaluate(method, ds, env,
                                method == Method::Flow ? &model : nullptr,
                                eval_config(g.config, g.seed));
      write_text(fs::path(g.out_dir) / ("report_" + rep.method + ".json"),
                 rep.to_json().dump(2) + "\n");
      std::cout << rep.method << " satisfaction " << rep.satisfaction << " mean_s "
                << rep.mean_seconds << std::endl;
      return 0;
    }

    if (*cmd_ode) {
      Dataset ds = read_dataset(od_data);
      EnvModel env = env_for_dataset(ds, g.config);
      nn::FlowModel model = nn::load_checkpoint(od_checkpoint);
      auto rows = ablate_ode_steps(model, ds, env, od_steps, eval_config(g.config, g.seed));
      std::string path = (fs::path(g.out_dir) / "ode_ablation.csv").string();
      write_ode_csv(rows, path);
      for (const auto &r : rows)
        std::cout << "N_s " << r.steps << " satisfaction " << r.satisfaction
                  << " mean_s " << r.mean_seconds << std::endl;
      return 0;
    }

    if (*cmd_aug) {
      Dataset ds = read_dataset(ag_data);
      EnvModel env = env_for_dataset(ds, g.config);
      nn::FlowModel model = nn::load_checkpoint(ag_checkpoint);
      auto rows =
          ablate_augmentation(model, ds, env, ag_counts, eval_config(g.config, g.seed));
      std::string path = (fs::path(g.out_dir) / "aug_ablation.csv").string();
      write_aug_csv(rows, path);
      for (const auto &r : rows)
        std::cout << "dup " << r.count << " satisfaction " << r.satisfaction << std::endl;
      return 0;
    }

    if (*cmd_plot) {
      Dataset ds = read_dataset(xp_data);
      EnvModel env = env_for_dataset(ds, g.config);
      const auto &rec = ds.records.at(size_t(xp_index));
      PlotData data;
      data.scene = rec.scene;
      if (!xp_checkpoint.empty()) {
        nn::FlowModel model = nn::load_checkpoint(xp_checkpoint);
        data.trajectories = nn::sample(model, to_graph(rec.spec), rec.scene.agent_init,
                                       xp_count, model.cfg.ode_steps, rng);
      } else {
        data.trajectories = rec.trajectories;
      }
      if (!data.trajectories.empty())
        data.best_index = nn::best_of(data.trajectories, rec.spec).index;
      export_plot_data(data, env.workspace,
                       (fs::path(g.out_dir) / "plot.json").string(),
                       (fs::path(g.out_dir) / "plot.svg").string());
      std::cout << "wrote plot.json / plot.svg to " << g.out_dir << std::endl;
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}
