#include "stlflow/nn/gcn.hpp"

#include <cmath>

namespace stlflow::nn {

GcnEncoder::GcnEncoder(const GcnConfig &config, Rng &rng) : cfg(config) {
  int prev = SpecGraph::kFeatureDim;
  for (int l = 0; l < cfg.layers; ++l) {
    int width = l + 1 == cfg.layers ? cfg.out_dim : cfg.hidden;
    layers.emplace_back(prev, width, rng);
    prev = width;
  }
}

Tensor GcnEncoder::encode(const SpecGraph &g) const {
  const int V = g.node_count();
  // scaled input features: times by 1/time_scale, geometry by 1/coord_scale
  Mat feats = g.node_features;
  for (int v = 0; v < V; ++v) {
    feats(v, 1) /= cfg.time_scale;
    feats(v, 2) /= cfg.time_scale;
    for (int c = 3; c <= 6; ++c) feats(v, c) /= cfg.coord_scale;
  }
  Tensor h = Tensor::from_mat(feats);

  // aggregation structure: self-loop + children, symmetric normalization
  std::vector<std::vector<int>> children(V);
  for (auto [src, dst] : g.edges) children[dst].push_back(src);
  std::vector<double> deg(V);
  for (int v = 0; v < V; ++v) deg[v] = 1.0 + children[v].size();
  std::vector<std::vector<std::pair<int, double>>> nb(V);
  for (int v = 0; v < V; ++v) {
    nb[v].push_back({v, 1.0 / deg[v]});
    for (int u : children[v]) nb[v].push_back({u, 1.0 / std::sqrt(deg[v] * deg[u])});
  }

  for (size_t l = 0; l < layers.size(); ++l) {
    h = layers[l].forward(neighbor_sum(h, nb));
    if (l + 1 < layers.size()) h = relu(h);
  }
  return mean_rows(h);
}

}  // namespace stlflow::nn
