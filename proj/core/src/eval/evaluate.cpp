#include "stlflow/eval/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include "stlflow/graph/spec_graph.hpp"
#include "stlflow/stl/semantics.hpp"

namespace stlflow {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Rng record_rng(uint64_t seed, int index) {
  return Rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(index) + 1);
}

// generation step shared by evaluate and the ablations; `graph` may encode an
// augmented spec while `spec` stays the scoring target
SpecResult run_record(Method method, const DatasetRecord &rec, const SpecGraph &graph,
                      const EnvModel &env, const nn::FlowModel *model,
                      const EvalConfig &cfg, int ode_steps, int index, bool timed) {
  SpecResult r;
  r.index = index;
  r.template_id = rec.template_id;
  Rng rng = record_rng(cfg.seed, index);

  if (method == Method::Flow) {
    if (!model) throw std::invalid_argument("evaluate: Flow requires a model");
    auto t0 = Clock::now();
    auto candidates = nn::sample(*model, graph, rec.scene.agent_init, cfg.K, ode_steps, rng);
    if (timed) r.seconds = seconds_since(t0);
    auto best = nn::best_of(candidates, rec.spec);
    r.robustness = best.robustness;
  } else if (method == Method::Cem) {
    auto t0 = Clock::now();
    PlanResult res = cem_plan(env, rec.scene.agent_init, rec.spec, cfg.cem, rng);
    if (timed) r.seconds = seconds_since(t0);
    r.robustness = res.robustness;
  } else {
    GradConfig g = cfg.grad;
    if (method == Method::GradLite) g.iters = GradConfig::lite().iters;
    g.restarts = std::min(cfg.K, g.restarts);
    auto t0 = Clock::now();
    PlanResult res = grad_plan(env, rec.scene.agent_init, rec.spec, g, rng);
    if (timed) r.seconds = seconds_since(t0);
    r.robustness = res.robustness;
  }
  r.satisfied = r.robustness >= 0.0;
  return r;
}

}  // namespace

const char *method_name(Method m) {
  switch (m) {
    case Method::Flow: return "flow";
    case Method::Grad: return "grad";
    case Method::GradLite: return "grad-lite";
    case Method::Cem: return "cem";
  }
  return "?";
}

std::string eval_config_hash(Method method, const EvalConfig &cfg) {
  nlohmann::json j{{"method", method_name(method)},
                   {"K", cfg.K},
                   {"grad",
                    {{"iters", cfg.grad.iters},
                     {"lr", cfg.grad.lr},
                     {"c1", cfg.grad.c1},
                     {"c2", cfg.grad.c2},
                     {"margin", cfg.grad.margin},
                     {"restarts", cfg.grad.restarts},
                     {"beta", cfg.grad.beta},
                     {"init_std", cfg.grad.init_std}}},
                   {"cem",
                    {{"population", cfg.cem.population},
                     {"elite", cfg.cem.elite},
                     {"iters", cfg.cem.iters},
                     {"init_std", cfg.cem.init_std}}},
                   {"ode_steps", cfg.ode_steps},
                   {"seed", cfg.seed}};
  std::string s = j.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json per_tpl = nlohmann::json::object();
  for (const auto &[name, st] : per_template)
    per_tpl[name] = {{"count", st.count}, {"satisfied", st.satisfied}};
  nlohmann::json per = nlohmann::json::array();
  for (const auto &r : per_spec)
    per.push_back({{"index", r.index},
                   {"template", template_name(r.template_id)},
                   {"robustness", r.robustness},
                   {"satisfied", r.satisfied},
                   {"seconds", r.seconds}});
  return {{"method", method},
          {"spec_count", spec_count},
          {"satisfaction", satisfaction},
          {"mean_seconds", mean_seconds},
          {"median_seconds", median_seconds},
          {"seed", seed},
          {"config_hash", config_hash},
          {"fairness_note", fairness_note},
          {"per_template", per_tpl},
          {"per_spec", per}};
}

EvalReport evaluate(Method method, const Dataset &split, const EnvModel &env,
                    const nn::FlowModel *model, const EvalConfig &cfg) {
  if (split.records.empty()) throw std::invalid_argument("evaluate: empty split");

  EvalReport report;
  report.method = method_name(method);
  report.spec_count = static_cast<int>(split.records.size());
  report.seed = cfg.seed;
  report.config_hash = eval_config_hash(method, cfg);
  report.fairness_note =
      "budgets: flow draws K samples; grad spends min(K, restarts) restarts of "
      "its fixed iteration budget; cem spends its fixed population x iteration "
      "budget";

  // warm-up, untimed
  {
    SpecGraph g = to_graph(split.records.front().spec);
    run_record(method, split.records.front(), g, env, model, cfg, cfg.ode_steps, 0,
               false);
  }

  int satisfied = 0;
  std::vector<double> times;
  for (size_t i = 0; i < split.records.size(); ++i) {
    const auto &rec = split.records[i];
    SpecGraph g = to_graph(rec.spec);
    SpecResult r = run_record(method, rec, g, env, model, cfg, cfg.ode_steps,
                              static_cast<int>(i), true);
    satisfied += r.satisfied;
    times.push_back(r.seconds);
    auto &st = report.per_template[template_name(rec.template_id)];
    ++st.count;
    st.satisfied += r.satisfied;
    report.per_spec.push_back(std::move(r));
  }
  report.satisfaction = double(satisfied) / report.spec_count;
  double total = 0.0;
  for (double t : times) total += t;
  report.mean_seconds = total / times.size();
  std::sort(times.begin(), times.end());
  size_t mid = times.size() / 2;
  report.median_seconds =
      times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  return report;
}

std::vector<OdeRow> ablate_ode_steps(const nn::FlowModel &model, const Dataset &split,
                                     const EnvModel &env, const std::vector<int> &steps,
                                     const EvalConfig &cfg) {
  if (steps.empty()) throw std::invalid_argument("ablate_ode_steps: empty steps list");
  std::vector<OdeRow> rows;
  for (int s : steps) {
    EvalConfig c = cfg;
    c.ode_steps = s;
    EvalReport rep = evaluate(Method::Flow, split, env, &model, c);
    rows.push_back({s, rep.satisfaction, rep.mean_seconds});
  }
  return rows;
}

void write_ode_csv(const std::vector<OdeRow> &rows, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "ode_steps,satisfaction,mean_seconds\n";
  for (const auto &r : rows)
    out << r.steps << ',' << r.satisfaction << ',' << r.mean_seconds << '\n';
}

std::vector<AugRow> ablate_augmentation(const nn::FlowModel &model, const Dataset &split,
                                        const EnvModel &env,
                                        const std::vector<int> &dup_counts,
                                        const EvalConfig &cfg) {
  if (split.records.empty())
    throw std::invalid_argument("ablate_augmentation: empty split");
  std::vector<AugRow> rows;
  for (int count : dup_counts) {
    int satisfied = 0;
    for (size_t i = 0; i < split.records.size(); ++i) {
      const auto &rec = split.records[i];
      Rng aug_rng(cfg.seed + 7919 * (i + 1) + count);
      StlPtr shown = count > 0 ? augment_duplicate_children(rec.spec, count, aug_rng)
                               : rec.spec;
      SpecGraph g = to_graph(shown);
      SpecResult r = run_record(Method::Flow, rec, g, env, &model, cfg, cfg.ode_steps,
                                static_cast<int>(i), false);
      satisfied += r.satisfied;
    }
    rows.push_back({count, double(satisfied) / split.records.size()});
  }
  return rows;
}

void write_aug_csv(const std::vector<AugRow> &rows, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "dup_count,satisfaction\n";
  for (const auto &r : rows) out << r.count << ',' << r.satisfaction << '\n';
}

double pearson(const std::vector<double> &xs, const std::vector<double> &ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("pearson: need two equal-length series");
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace stlflow
