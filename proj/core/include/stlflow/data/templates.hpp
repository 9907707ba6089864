#pragma once

#include "stlflow/data/scene.hpp"

namespace stlflow {

enum class TemplateId { Single, Multi, Sequential, Partial };

const char *template_name(TemplateId id);
TemplateId template_from_name(const std::string &name);

class InsufficientGoals : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TemplateConfig {
  int min_width_div = 8;     // minimum interval width = T / min_width_div
  double dwell_prob = 0.3;   // chance of the F G dwell form in Single/Sequential
};

// Instantiates one of the four template families over the scene's objects.
// Sequential and Partial require >= 2 goals.
StlPtr sample_spec(TemplateId id, const SceneSpec &scene, Rng &rng, int T,
                   const TemplateConfig &cfg = {});

}  // namespace stlflow
