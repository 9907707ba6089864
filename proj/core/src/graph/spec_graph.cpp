#include "stlflow/graph/spec_graph.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <set>
#include <stdexcept>
#include <string>

namespace stlflow {

namespace {

int type_id(Kind k) { return static_cast<int>(k); }

struct Builder {
  std::vector<std::array<double, SpecGraph::kFeatureDim>> features;
  std::vector<std::pair<int, int>> edges;

  int add_node(int type, int t_start, int t_end, const Predicate *pred,
               bool until_left) {
    std::array<double, SpecGraph::kFeatureDim> f{};
    f[0] = type;
    f[1] = t_start;
    f[2] = t_end;
    if (pred) {
      f[3] = pred->center[0];
      f[4] = pred->center[1];
      f[5] = pred->center[2];
      f[6] = pred->extent;
    } else {
      f[3] = f[4] = f[5] = f[6] = -1;
    }
    f[7] = until_left ? 1 : 0;
    features.push_back(f);
    return static_cast<int>(features.size()) - 1;
  }

  int visit(const StlExpr *node, bool until_left) {
    if (node->kind == Kind::Ap && node->pred.polarity == Polarity::Avoid) {
      // materialize avoid as Not(reach) so polarity is structural
      int self = add_node(type_id(Kind::Not), -1, -1, nullptr, until_left);
      Predicate reach = node->pred;
      reach.polarity = Polarity::Reach;
      int child = add_node(type_id(Kind::Ap), -1, -1, &reach, false);
      edges.emplace_back(child, self);
      return self;
    }
    bool timed = node->kind == Kind::Eventually || node->kind == Kind::Always ||
                 node->kind == Kind::Until;
    int self = add_node(type_id(node->kind), timed ? node->a : -1,
                        timed ? node->b : -1,
                        node->kind == Kind::Ap ? &node->pred : nullptr, until_left);
    for (size_t i = 0; i < node->children.size(); ++i) {
      bool left = node->kind == Kind::Until && i == 0;
      int child = visit(node->children[i].get(), left);
      edges.emplace_back(child, self);
    }
    return self;
  }
};

}  // namespace

SpecGraph to_graph(const StlPtr &spec) {
  Builder b;
  int root = b.visit(spec.get(), false);
  SpecGraph g;
  g.root_index = root;
  g.edges = std::move(b.edges);
  g.node_features = Mat(static_cast<int>(b.features.size()), SpecGraph::kFeatureDim);
  for (int v = 0; v < g.node_features.rows; ++v)
    for (int i = 0; i < SpecGraph::kFeatureDim; ++i)
      g.node_features(v, i) = b.features[v][i];
  return g;
}

StlPtr augment_duplicate_children(const StlPtr &spec, int count, Rng &rng) {
  if (count < 0) throw std::invalid_argument("augmentation count must be >= 0");
  StlPtr current = spec;
  for (int round = 0; round < count; ++round) {
    // collect And/Or nodes by preorder position
    std::vector<const StlExpr *> targets;
    auto collect = [&](auto &&self, const StlExpr *n) -> void {
      if (n->kind == Kind::And || n->kind == Kind::Or) targets.push_back(n);
      for (const auto &c : n->children) self(self, c.get());
    };
    collect(collect, current.get());
    if (targets.empty()) return current;
    const StlExpr *picked = targets[uniform_int(rng, 0, static_cast<int>(targets.size()) - 1)];
    int child_idx = uniform_int(rng, 0, static_cast<int>(picked->children.size()) - 1);
    // rebuild the path to the picked node, appending the duplicate
    auto rebuild = [&](auto &&self, const StlExpr *n) -> StlPtr {
      auto copy = std::make_shared<StlExpr>(n->kind);
      copy->a = n->a;
      copy->b = n->b;
      copy->pred = n->pred;
      copy->children = n->children;
      if (n == picked) {
        copy->children.push_back(n->children[child_idx]);
        return copy;
      }
      for (size_t i = 0; i < n->children.size(); ++i) {
        bool contains = false;
        auto find = [&](auto &&f, const StlExpr *x) -> void {
          if (x == picked) contains = true;
          for (const auto &c : x->children)
            if (!contains) f(f, c.get());
        };
        find(find, n->children[i].get());
        if (contains) {
          copy->children[i] = self(self, n->children[i].get());
          break;
        }
      }
      return copy;
    };
    current = rebuild(rebuild, current.get());
  }
  return current;
}

namespace {

uint64_t hash_mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

uint64_t feature_hash(const Mat &features, int v) {
  uint64_t h = 1469598103934665603ULL;
  for (int i = 0; i < features.cols; ++i) {
    double d = features(v, i);
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    h = hash_mix(h, bits);
  }
  return h;
}

// Refined color multiset after 1-WL stabilization. Neighborhoods follow the
// directed edges both ways so parent identity also refines children.
std::multiset<uint64_t> wl_colors(const SpecGraph &g) {
  int V = g.node_count();
  std::vector<uint64_t> color(V);
  for (int v = 0; v < V; ++v) color[v] = feature_hash(g.node_features, v);
  std::vector<std::vector<int>> in(V), out(V);
  for (auto [src, dst] : g.edges) {
    in[dst].push_back(src);
    out[src].push_back(dst);
  }
  for (int iter = 0; iter < V; ++iter) {
    std::vector<uint64_t> next(V);
    for (int v = 0; v < V; ++v) {
      std::vector<uint64_t> ins, outs;
      for (int u : in[v]) ins.push_back(color[u]);
      for (int u : out[v]) outs.push_back(color[u]);
      std::sort(ins.begin(), ins.end());
      std::sort(outs.begin(), outs.end());
      uint64_t h = hash_mix(color[v], 0x5bd1e995);
      for (uint64_t c : ins) h = hash_mix(h, c);
      h = hash_mix(h, 0x2545f491);
      for (uint64_t c : outs) h = hash_mix(h, c);
      next[v] = h;
    }
    if (next == color) break;
    color = std::move(next);
  }
  return {color.begin(), color.end()};
}

}  // namespace

bool graph_distinguishable(const SpecGraph &g1, const SpecGraph &g2) {
  if (g1.node_count() != g2.node_count()) return true;
  return wl_colors(g1) != wl_colors(g2);
}

bool graph_distinguishable(const StlPtr &phi1, const StlPtr &phi2) {
  return graph_distinguishable(to_graph(phi1), to_graph(phi2));
}

nlohmann::json graph_to_json(const SpecGraph &g) {
  nlohmann::json features = nlohmann::json::array();
  for (int v = 0; v < g.node_count(); ++v) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < SpecGraph::kFeatureDim; ++i) row.push_back(g.node_features(v, i));
    features.push_back(row);
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto [src, dst] : g.edges) edges.push_back({src, dst});
  return {{"features", features}, {"edges", edges}, {"root", g.root_index}};
}

SpecGraph graph_from_json(const nlohmann::json &j) {
  SpecGraph g;
  const auto &features = j.at("features");
  g.node_features = Mat(static_cast<int>(features.size()), SpecGraph::kFeatureDim);
  for (int v = 0; v < g.node_features.rows; ++v)
    for (int i = 0; i < SpecGraph::kFeatureDim; ++i)
      g.node_features(v, i) = features[v][i].get<double>();
  for (const auto &e : j.at("edges"))
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  g.root_index = j.at("root").get<int>();
  return g;
}

}  // namespace stlflow
