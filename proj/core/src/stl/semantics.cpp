#include "stlflow/stl/semantics.hpp"

#include <algorithm>
#include <limits>

namespace stlflow {

int horizon(const StlPtr &spec) {
  switch (spec->kind) {
    case Kind::Top:
    case Kind::Ap:
      return 0;
    case Kind::Not:
      return horizon(spec->children[0]);
    case Kind::And:
    case Kind::Or: {
      int h = 0;
      for (const auto &c : spec->children) h = std::max(h, horizon(c));
      return h;
    }
    case Kind::Eventually:
    case Kind::Always:
      return spec->b + horizon(spec->children[0]);
    case Kind::Until:
      return spec->b + std::max(horizon(spec->children[0]), horizon(spec->children[1]));
  }
  return 0;
}

namespace {

void check_time(const Trajectory &s, int t) {
  if (t < 0 || t > s.horizon())
    throw HorizonError("evaluation time " + std::to_string(t) +
                       " outside signal [0, " + std::to_string(s.horizon()) + "]");
}

}  // namespace

bool eval_bool(const Trajectory &s, int t, const StlPtr &spec) {
  check_time(s, t);
  const int T = s.horizon();
  switch (spec->kind) {
    case Kind::Top:
      return true;
    case Kind::Ap:
      return spec->pred.mu(s.states.row(t)) >= 0.0;
    case Kind::Not:
      return !eval_bool(s, t, spec->children[0]);
    case Kind::And:
      for (const auto &c : spec->children)
        if (!eval_bool(s, t, c)) return false;
      return true;
    case Kind::Or:
      for (const auto &c : spec->children)
        if (eval_bool(s, t, c)) return true;
      return false;
    case Kind::Eventually: {
      int hi = std::min(t + spec->b, T);
      for (int tp = std::min(t + spec->a, T); tp <= hi; ++tp)
        if (eval_bool(s, tp, spec->children[0])) return true;
      return false;
    }
    case Kind::Always: {
      int hi = std::min(t + spec->b, T);
      for (int tp = std::min(t + spec->a, T); tp <= hi; ++tp)
        if (!eval_bool(s, tp, spec->children[0])) return false;
      return true;
    }
    case Kind::Until: {
      int hi = std::min(t + spec->b, T);
      for (int tp = std::min(t + spec->a, T); tp <= hi; ++tp) {
        if (!eval_bool(s, tp, spec->children[1])) continue;
        bool held = true;
        for (int tpp = t; tpp <= tp; ++tpp) {
          if (!eval_bool(s, tpp, spec->children[0])) {
            held = false;
            break;
          }
        }
        if (held) return true;
      }
      return false;
    }
  }
  return false;
}

double robustness(const Trajectory &s, int t, const StlPtr &spec) {
  check_time(s, t);
  const int T = s.horizon();
  switch (spec->kind) {
    case Kind::Top:
      return 1.0;
    case Kind::Ap:
      return spec->pred.mu(s.states.row(t));
    case Kind::Not:
      return -robustness(s, t, spec->children[0]);
    case Kind::And: {
      double v = robustness(s, t, spec->children[0]);
      for (size_t i = 1; i < spec->children.size(); ++i)
        v = std::min(v, robustness(s, t, spec->children[i]));
      return v;
    }
    case Kind::Or: {
      double v = robustness(s, t, spec->children[0]);
      for (size_t i = 1; i < spec->children.size(); ++i)
        v = std::max(v, robustness(s, t, spec->children[i]));
      return v;
    }
    case Kind::Eventually: {
      int lo = std::min(t + spec->a, T), hi = std::min(t + spec->b, T);
      double v = robustness(s, lo, spec->children[0]);
      for (int tp = lo + 1; tp <= hi; ++tp)
        v = std::max(v, robustness(s, tp, spec->children[0]));
      return v;
    }
    case Kind::Always: {
      int lo = std::min(t + spec->a, T), hi = std::min(t + spec->b, T);
      double v = robustness(s, lo, spec->children[0]);
      for (int tp = lo + 1; tp <= hi; ++tp)
        v = std::min(v, robustness(s, tp, spec->children[0]));
      return v;
    }
    case Kind::Until: {
      int lo = std::min(t + spec->a, T), hi = std::min(t + spec->b, T);
      double best = -std::numeric_limits<double>::infinity();
      double inner = std::numeric_limits<double>::infinity();
      for (int tpp = t; tpp < lo; ++tpp)
        inner = std::min(inner, robustness(s, tpp, spec->children[0]));
      for (int tp = lo; tp <= hi; ++tp) {
        inner = std::min(inner, robustness(s, tp, spec->children[0]));
        best = std::max(best, std::min(robustness(s, tp, spec->children[1]), inner));
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace stlflow
