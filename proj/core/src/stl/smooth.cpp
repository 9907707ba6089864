#include "stlflow/stl/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace stlflow {

namespace {

// Soft (or hard) max over a small set of values, with the weights needed for
// the backward pass. softmin(v) = -softmax(-v).
struct Reducer {
  double beta;
  bool hard;

  double reduce_max(const std::vector<double> &vals) const {
    double m = *std::max_element(vals.begin(), vals.end());
    if (hard) return m;
    double acc = 0.0;
    for (double v : vals) acc += std::exp(beta * (v - m));
    return m + std::log(acc) / beta;
  }

  // d out / d vals[i], evaluated at the already-computed output.
  void max_weights(const std::vector<double> &vals, double out,
                   std::vector<double> &w) const {
    w.assign(vals.size(), 0.0);
    if (hard) {
      for (size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] == out ||
            vals[i] == *std::max_element(vals.begin(), vals.end())) {
          w[i] = 1.0;
          return;
        }
      }
      w[0] = 1.0;
      return;
    }
    for (size_t i = 0; i < vals.size(); ++i) w[i] = std::exp(beta * (vals[i] - out));
  }
};

struct NodeTable {
  const StlExpr *node;
  std::vector<double> val;  // indexed by time 0..T
  std::vector<double> adj;
};

class SmoothEval {
 public:
  SmoothEval(const Trajectory &s, const StlPtr &spec, const SmoothConfig &cfg)
      : s_(s), T_(s.horizon()), red_{cfg.beta, cfg.mode == SmoothMode::Hard} {
    if (!(cfg.beta > 0)) throw std::invalid_argument("SmoothConfig beta must be > 0");
    postorder(spec.get());
  }

  SmoothResult run(int t0) {
    if (t0 < 0 || t0 > T_) throw HorizonError("evaluation time outside signal");
    forward();
    for (auto &nt : tables_) nt.adj.assign(T_ + 1, 0.0);
    tables_[index_.at(root_)].adj[t0] = 1.0;
    SmoothResult res;
    res.value = tables_[index_.at(root_)].val[t0];
    res.state_grad = Mat(T_ + 1, s_.state_dim());
    backward(res.state_grad);
    return res;
  }

 private:
  const Trajectory &s_;
  int T_;
  Reducer red_;
  std::vector<NodeTable> tables_;                       // postorder
  std::unordered_map<const StlExpr *, int> index_;      // node -> table slot
  const StlExpr *root_ = nullptr;

  void postorder(const StlExpr *node) {
    root_ = node;
    if (index_.count(node)) return;  // shared subtree, evaluate once
    for (const auto &c : node->children) {
      const StlExpr *saved = root_;
      postorder(c.get());
      root_ = saved;
    }
    index_[node] = static_cast<int>(tables_.size());
    tables_.push_back({node, {}, {}});
  }

  const std::vector<double> &vals(const StlExpr *node) {
    return tables_[index_.at(node)].val;
  }

  void forward() {
    for (auto &nt : tables_) {
      const StlExpr *n = nt.node;
      nt.val.assign(T_ + 1, 0.0);
      for (int t = 0; t <= T_; ++t) nt.val[t] = forward_at(n, t);
    }
  }

  double forward_at(const StlExpr *n, int t) {
    switch (n->kind) {
      case Kind::Top:
        return 1.0;
      case Kind::Ap:
        return n->pred.mu(s_.states.row(t));
      case Kind::Not:
        return -vals(n->children[0].get())[t];
      case Kind::And: {
        scratch_.clear();
        for (const auto &c : n->children) scratch_.push_back(-vals(c.get())[t]);
        return -red_.reduce_max(scratch_);
      }
      case Kind::Or: {
        scratch_.clear();
        for (const auto &c : n->children) scratch_.push_back(vals(c.get())[t]);
        return red_.reduce_max(scratch_);
      }
      case Kind::Eventually: {
        auto [lo, hi] = window(n, t);
        const auto &cv = vals(n->children[0].get());
        scratch_.assign(cv.begin() + lo, cv.begin() + hi + 1);
        return red_.reduce_max(scratch_);
      }
      case Kind::Always: {
        auto [lo, hi] = window(n, t);
        const auto &cv = vals(n->children[0].get());
        scratch_.clear();
        for (int tp = lo; tp <= hi; ++tp) scratch_.push_back(-cv[tp]);
        return -red_.reduce_max(scratch_);
      }
      case Kind::Until: {
        auto [lo, hi] = window(n, t);
        const auto &lv = vals(n->children[0].get());
        const auto &rv = vals(n->children[1].get());
        scratch_.clear();
        for (int tp = lo; tp <= hi; ++tp) {
          std::vector<double> inner;
          for (int tpp = t; tpp <= tp; ++tpp) inner.push_back(-lv[tpp]);
          double hold = -red_.reduce_max(inner);
          scratch_.push_back(-red_.reduce_max({-rv[tp], -hold}));
        }
        return red_.reduce_max(scratch_);
      }
    }
    return 0.0;
  }

  std::pair<int, int> window(const StlExpr *n, int t) const {
    return {std::min(t + n->a, T_), std::min(t + n->b, T_)};
  }

  void backward(Mat &state_grad) {
    std::vector<double> w;
    for (int idx = static_cast<int>(tables_.size()) - 1; idx >= 0; --idx) {
      NodeTable &nt = tables_[idx];
      const StlExpr *n = nt.node;
      for (int t = 0; t <= T_; ++t) {
        double a = nt.adj[t];
        if (a == 0.0) continue;
        backward_at(n, t, a, state_grad, w);
      }
    }
  }

  std::vector<double> &adj(const StlExpr *node) {
    return tables_[index_.at(node)].adj;
  }

  void backward_at(const StlExpr *n, int t, double a, Mat &state_grad,
                   std::vector<double> &w) {
    switch (n->kind) {
      case Kind::Top:
        return;
      case Kind::Ap: {
        double g[2];
        n->pred.mu_grad(s_.states.row(t), g);
        state_grad(t, 0) += a * g[0];
        state_grad(t, 1) += a * g[1];
        return;
      }
      case Kind::Not:
        adj(n->children[0].get())[t] -= a;
        return;
      case Kind::And: {
        double out = vals(n)[t];
        scratch_.clear();
        for (const auto &c : n->children) scratch_.push_back(-vals(c.get())[t]);
        red_.max_weights(scratch_, -out, w);
        for (size_t i = 0; i < n->children.size(); ++i)
          adj(n->children[i].get())[t] += a * w[i];
        return;
      }
      case Kind::Or: {
        double out = vals(n)[t];
        scratch_.clear();
        for (const auto &c : n->children) scratch_.push_back(vals(c.get())[t]);
        red_.max_weights(scratch_, out, w);
        for (size_t i = 0; i < n->children.size(); ++i)
          adj(n->children[i].get())[t] += a * w[i];
        return;
      }
      case Kind::Eventually: {
        auto [lo, hi] = window(n, t);
        const auto &cv = vals(n->children[0].get());
        scratch_.assign(cv.begin() + lo, cv.begin() + hi + 1);
        red_.max_weights(scratch_, vals(n)[t], w);
        auto &ca = adj(n->children[0].get());
        for (int tp = lo; tp <= hi; ++tp) ca[tp] += a * w[tp - lo];
        return;
      }
      case Kind::Always: {
        auto [lo, hi] = window(n, t);
        const auto &cv = vals(n->children[0].get());
        scratch_.clear();
        for (int tp = lo; tp <= hi; ++tp) scratch_.push_back(-cv[tp]);
        red_.max_weights(scratch_, -vals(n)[t], w);
        auto &ca = adj(n->children[0].get());
        for (int tp = lo; tp <= hi; ++tp) ca[tp] += a * w[tp - lo];
        return;
      }
      case Kind::Until: {
        auto [lo, hi] = window(n, t);
        const auto &lv = vals(n->children[0].get());
        const auto &rv = vals(n->children[1].get());
        auto &la = adj(n->children[0].get());
        auto &ra = adj(n->children[1].get());
        // Recompute the per-t' terms m(t') = softmin(right(t'), hold(t, t')).
        std::vector<double> terms, holds;
        for (int tp = lo; tp <= hi; ++tp) {
          std::vector<double> inner;
          for (int tpp = t; tpp <= tp; ++tpp) inner.push_back(-lv[tpp]);
          double hold = -red_.reduce_max(inner);
          holds.push_back(hold);
          terms.push_back(-red_.reduce_max({-rv[tp], -hold}));
        }
        red_.max_weights(terms, vals(n)[t], w);
        for (int tp = lo; tp <= hi; ++tp) {
          double wa = a * w[tp - lo];
          if (wa == 0.0) continue;
          double m = terms[tp - lo];
          std::vector<double> pair_w;
          red_.max_weights({-rv[tp], -holds[tp - lo]}, -m, pair_w);
          ra[tp] += wa * pair_w[0];
          double wh = wa * pair_w[1];
          if (wh != 0.0) {
            std::vector<double> inner, iw;
            for (int tpp = t; tpp <= tp; ++tpp) inner.push_back(-lv[tpp]);
            red_.max_weights(inner, -holds[tp - lo], iw);
            for (int tpp = t; tpp <= tp; ++tpp) la[tpp] += wh * iw[tpp - t];
          }
        }
        return;
      }
    }
  }

  std::vector<double> scratch_;
};

}  // namespace

SmoothResult smooth_robustness(const Trajectory &s, int t, const StlPtr &spec,
                               const SmoothConfig &cfg) {
  return SmoothEval(s, spec, cfg).run(t);
}

}  // namespace stlflow
