#pragma once

#include <optional>

#include "stlflow/data/collect.hpp"
#include "stlflow/data/dataset.hpp"

namespace stlflow {

struct GenerateConfig {
  int demos = 2;              // stored demonstrations per spec
  Solver solver = Solver::Grad;
  int goals_lo = 1, goals_hi = 2;
  int obstacles_lo = 0, obstacles_hi = 4;
  int max_attempts = 50;      // resamples per record before giving up
  CollectConfig collect;
  PlacementLimits limits;
  TemplateConfig tpl;
};

// One scene + spec + verified demonstrations, or nullopt when every attempt
// produced an unsolved spec. Sequential/Partial force >= 2 goals; the maze
// solver path samples placeholder reach intervals and infers them from the
// first demonstration.
std::optional<DatasetRecord> generate_record(const EnvModel &env, TemplateId id,
                                             Rng &rng, const GenerateConfig &cfg = {});

// `count` records of the given template; unsolved specs are discarded and
// resampled, so the result always has exactly `count` records (throws
// DatasetError when the env/config cannot produce them).
Dataset generate_dataset(const EnvModel &env, TemplateId id, int count, Rng &rng,
                         const GenerateConfig &cfg = {});

}  // namespace stlflow
