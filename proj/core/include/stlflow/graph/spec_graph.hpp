#pragma once

#include <json.hpp>
#include <utility>
#include <vector>

#include "stlflow/mat.hpp"
#include "stlflow/rng.hpp"
#include "stlflow/stl/ast.hpp"

namespace stlflow {

// Directed feature graph of an STL syntax tree. One node per operator /
// atomic proposition, edges point child -> parent. Feature layout per node:
//   [type_id, t_start, t_end, x, y, z, extent, until_left_flag]
// with -1 sentinels for untimed / non-predicate slots.
// type_id: Top=0, Ap=1, Not=2, And=3, Or=4, Eventually=5, Always=6, Until=7.
struct SpecGraph {
  static constexpr int kFeatureDim = 8;

  Mat node_features;                      // V x 8
  std::vector<std::pair<int, int>> edges; // (child, parent) index pairs
  int root_index = 0;

  int node_count() const { return node_features.rows; }
};

// Deterministic depth-first encoding (root first, children left to right).
// Avoid-polarity predicates are materialized as Not(reach-Ap) so polarity is
// visible structurally; the 8-d layout carries no polarity slot.
SpecGraph to_graph(const StlPtr &spec);

// Out-of-distribution augmentation: `count` rounds, each appending a copy of
// a random child to a random And/Or node. Hard robustness is unchanged by
// min/max idempotence. No-op when the tree has no And/Or nodes.
StlPtr augment_duplicate_children(const StlPtr &spec, int count, Rng &rng);

// 1-WL color refinement with hashed node features as initial colors.
// True when the refined color histograms differ.
bool graph_distinguishable(const SpecGraph &g1, const SpecGraph &g2);
bool graph_distinguishable(const StlPtr &phi1, const StlPtr &phi2);

// Graph JSON: {"features": [[8 floats]...], "edges": [[src,dst]...], "root": int}
nlohmann::json graph_to_json(const SpecGraph &g);
SpecGraph graph_from_json(const nlohmann::json &j);

}  // namespace stlflow
