#pragma once

#include <map>
#include <string>

#include "stlflow/data/dataset.hpp"
#include "stlflow/env/env.hpp"
#include "stlflow/nn/flow.hpp"
#include "stlflow/plan/planners.hpp"

namespace stlflow {

enum class Method { Flow, Grad, GradLite, Cem };
const char *method_name(Method m);

struct EvalConfig {
  int K = 64;  // candidates per spec (flow samples / planner restart cap)
  GradConfig grad;
  CemConfig cem;
  int ode_steps = 10;
  uint64_t seed = 0;
};

struct SpecResult {
  int index = 0;
  TemplateId template_id = TemplateId::Single;
  double robustness = 0.0;
  bool satisfied = false;
  double seconds = 0.0;  // generation only, scoring excluded
};

struct TemplateStats {
  int count = 0;
  int satisfied = 0;
};

struct EvalReport {
  std::string method;
  int spec_count = 0;
  double satisfaction = 0.0;
  double mean_seconds = 0.0;
  double median_seconds = 0.0;
  uint64_t seed = 0;
  std::string config_hash;
  std::string fairness_note;
  std::map<std::string, TemplateStats> per_template;
  std::vector<SpecResult> per_spec;

  nlohmann::json to_json() const;
};

// Hex FNV-1a over the canonical JSON dump of (method, config).
std::string eval_config_hash(Method method, const EvalConfig &cfg);

// Best-of-K evaluation over every record of the split. model may be null for
// the planner methods; the first record serves as an untimed warm-up.
EvalReport evaluate(Method method, const Dataset &split, const EnvModel &env,
                    const nn::FlowModel *model, const EvalConfig &cfg);

struct OdeRow {
  int steps = 0;
  double satisfaction = 0.0;
  double mean_seconds = 0.0;
};

std::vector<OdeRow> ablate_ode_steps(const nn::FlowModel &model, const Dataset &split,
                                     const EnvModel &env, const std::vector<int> &steps,
                                     const EvalConfig &cfg);
void write_ode_csv(const std::vector<OdeRow> &rows, const std::string &path);

struct AugRow {
  int count = 0;
  double satisfaction = 0.0;
};

// Encodes each spec with `count` duplicated And/Or children, re-samples, and
// scores against the original spec.
std::vector<AugRow> ablate_augmentation(const nn::FlowModel &model, const Dataset &split,
                                        const EnvModel &env,
                                        const std::vector<int> &dup_counts,
                                        const EvalConfig &cfg);
void write_aug_csv(const std::vector<AugRow> &rows, const std::string &path);

// Pearson correlation of two equal-length series.
double pearson(const std::vector<double> &xs, const std::vector<double> &ys);

}  // namespace stlflow
