#pragma once

#include "stlflow/graph/spec_graph.hpp"
#include "stlflow/nn/modules.hpp"

namespace stlflow::nn {

struct GcnConfig {
  int layers = 4;
  int hidden = 64;       // desk-scale width (full scale 256)
  int out_dim = 64;      // embedding dimension d_z
  double time_scale = 64.0;   // t_start / t_end divided by the horizon
  double coord_scale = 5.0;   // coordinates / extent divided by workspace half-extent
};

// Graph convolution encoder over a spec graph. Per layer:
//   h_v <- ReLU(W * agg(v) + b),  agg over self + children with symmetric
// degree normalization; readout is the mean over node states.
struct GcnEncoder {
  GcnConfig cfg;
  std::vector<LinearLayer> layers;

  GcnEncoder() = default;
  GcnEncoder(const GcnConfig &config, Rng &rng);

  // 1 x out_dim embedding
  Tensor encode(const SpecGraph &g) const;

  void collect_params(std::vector<Tensor> &out) const {
    for (const auto &l : layers) l.collect_params(out);
  }
};

}  // namespace stlflow::nn
