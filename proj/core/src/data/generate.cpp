#include "stlflow/data/generate.hpp"

#include "stlflow/stl/semantics.hpp"

namespace stlflow {

namespace {

// maze skeletons carry the placeholder [0, T] on every reach interval
StlPtr widen_reach_intervals(const StlPtr &spec, int T) {
  std::vector<StlPtr> kids;
  for (const auto &c : spec->children) kids.push_back(widen_reach_intervals(c, T));
  switch (spec->kind) {
    case Kind::Eventually:
      return StlExpr::eventually(0, T, kids[0]);
    case Kind::Always:
      return StlExpr::always(spec->a, spec->b, kids[0]);
    case Kind::Until:
      return StlExpr::until(spec->a, spec->b, kids[0], kids[1]);
    case Kind::Not:
      return StlExpr::negate(kids[0]);
    case Kind::And:
      return StlExpr::conj(std::move(kids));
    case Kind::Or:
      return StlExpr::disj(std::move(kids));
    default:
      return spec;
  }
}

}  // namespace

std::optional<DatasetRecord> generate_record(const EnvModel &env, TemplateId id,
                                             Rng &rng, const GenerateConfig &cfg) {
  int goals_lo = cfg.goals_lo;
  if (id == TemplateId::Sequential || id == TemplateId::Partial)
    goals_lo = std::max(goals_lo, 2);
  int goals_hi = std::max(goals_lo, cfg.goals_hi);

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    SceneSpec scene;
    try {
      scene = place_scene(env, uniform_int(rng, goals_lo, goals_hi),
                          uniform_int(rng, cfg.obstacles_lo, cfg.obstacles_hi), rng,
                          cfg.limits);
    } catch (const PlacementFailed &) {
      continue;
    }

    StlPtr spec = sample_spec(id, scene, rng, env.T, cfg.tpl);
    if (cfg.solver == Solver::AstarTrack) spec = widen_reach_intervals(spec, env.T);

    auto demos = collect_demo(env, spec, scene, cfg.solver, cfg.demos, rng, cfg.collect);
    if (demos.empty()) continue;

    if (cfg.solver == Solver::AstarTrack) {
      StlPtr inferred;
      try {
        inferred = infer_intervals(spec, demos.front(), rng);
      } catch (const InferenceFailed &) {
        continue;
      }
      std::vector<Trajectory> kept;
      for (auto &d : demos)
        if (robustness(d, 0, inferred) >= 0.0) kept.push_back(std::move(d));
      if (kept.empty()) continue;
      spec = inferred;
      demos = std::move(kept);
    }

    DatasetRecord rec;
    rec.spec = spec;
    rec.template_id = id;
    rec.scene = scene;
    for (const auto &d : demos) rec.robustness_scores.push_back(robustness(d, 0, spec));
    rec.trajectories = std::move(demos);
    return rec;
  }
  return std::nullopt;
}

Dataset generate_dataset(const EnvModel &env, TemplateId id, int count, Rng &rng,
                         const GenerateConfig &cfg) {
  Dataset ds;
  ds.env_name = env.name();
  while (static_cast<int>(ds.records.size()) < count) {
    auto rec = generate_record(env, id, rng, cfg);
    if (!rec)
      throw DatasetError("generate_dataset: no solvable spec after " +
                         std::to_string(cfg.max_attempts) + " attempts");
    ds.records.push_back(std::move(*rec));
  }
  return ds;
}

}  // namespace stlflow
