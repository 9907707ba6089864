#pragma once

// Shared test utilities: an independent brute-force STL oracle (deliberately
// naive, no sharing or incremental evaluation) and random generators.

#include <algorithm>
#include <cmath>
#include <limits>

#include "stlflow/rng.hpp"
#include "stlflow/stl/ast.hpp"
#include "stlflow/trajectory.hpp"

namespace testutil {

using namespace stlflow;

inline double oracle_mu(const Predicate &p, const double *state) {
  double dx = state[0] - p.center[0];
  double dy = state[1] - p.center[1];
  double dz = 0.0 - p.center[2];
  double d = p.shape == Shape::Circle
                 ? std::sqrt(dx * dx + dy * dy + dz * dz)
                 : std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)});
  return p.polarity == Polarity::Reach ? p.extent - d : d - p.extent;
}

inline double oracle_rho(const Trajectory &s, int t, const StlPtr &phi) {
  const int T = s.horizon();
  auto clip = [&](int k) { return std::min(k, T); };
  switch (phi->kind) {
    case Kind::Top:
      return 1.0;
    case Kind::Ap:
      return oracle_mu(phi->pred, s.states.row(t));
    case Kind::Not:
      return -oracle_rho(s, t, phi->children[0]);
    case Kind::And: {
      double v = std::numeric_limits<double>::infinity();
      for (const auto &c : phi->children) v = std::min(v, oracle_rho(s, t, c));
      return v;
    }
    case Kind::Or: {
      double v = -std::numeric_limits<double>::infinity();
      for (const auto &c : phi->children) v = std::max(v, oracle_rho(s, t, c));
      return v;
    }
    case Kind::Eventually: {
      double v = -std::numeric_limits<double>::infinity();
      for (int k = clip(t + phi->a); k <= clip(t + phi->b); ++k)
        v = std::max(v, oracle_rho(s, k, phi->children[0]));
      return v;
    }
    case Kind::Always: {
      double v = std::numeric_limits<double>::infinity();
      for (int k = clip(t + phi->a); k <= clip(t + phi->b); ++k)
        v = std::min(v, oracle_rho(s, k, phi->children[0]));
      return v;
    }
    case Kind::Until: {
      double v = -std::numeric_limits<double>::infinity();
      for (int k = clip(t + phi->a); k <= clip(t + phi->b); ++k) {
        double inner = oracle_rho(s, k, phi->children[1]);
        for (int j = t; j <= k; ++j)
          inner = std::min(inner, oracle_rho(s, j, phi->children[0]));
        v = std::max(v, inner);
      }
      return v;
    }
  }
  return 0.0;
}

inline bool oracle_sat(const Trajectory &s, int t, const StlPtr &phi) {
  const int T = s.horizon();
  auto clip = [&](int k) { return std::min(k, T); };
  switch (phi->kind) {
    case Kind::Top:
      return true;
    case Kind::Ap:
      return oracle_mu(phi->pred, s.states.row(t)) >= 0.0;
    case Kind::Not:
      return !oracle_sat(s, t, phi->children[0]);
    case Kind::And:
      for (const auto &c : phi->children)
        if (!oracle_sat(s, t, c)) return false;
      return true;
    case Kind::Or:
      for (const auto &c : phi->children)
        if (oracle_sat(s, t, c)) return true;
      return false;
    case Kind::Eventually:
      for (int k = clip(t + phi->a); k <= clip(t + phi->b); ++k)
        if (oracle_sat(s, k, phi->children[0])) return true;
      return false;
    case Kind::Always:
      for (int k = clip(t + phi->a); k <= clip(t + phi->b); ++k)
        if (!oracle_sat(s, k, phi->children[0])) return false;
      return true;
    case Kind::Until:
      for (int k = clip(t + phi->a); k <= clip(t + phi->b); ++k) {
        if (!oracle_sat(s, k, phi->children[1])) continue;
        bool held = true;
        for (int j = t; j <= k; ++j)
          if (!oracle_sat(s, j, phi->children[0])) {
            held = false;
            break;
          }
        if (held) return true;
      }
      return false;
  }
  return false;
}

inline Predicate random_predicate(Rng &rng) {
  Predicate p;
  p.shape = uniform_int(rng, 0, 1) ? Shape::Circle : Shape::Box;
  p.center = {uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0), 0.0};
  p.extent = uniform(rng, 0.3, 1.5);
  p.polarity = uniform_int(rng, 0, 1) ? Polarity::Reach : Polarity::Avoid;
  return p;
}

inline StlPtr random_spec(Rng &rng, int depth, int T) {
  if (depth <= 0) {
    if (uniform_int(rng, 0, 9) == 0) return StlExpr::top();
    return StlExpr::ap(random_predicate(rng));
  }
  int a = uniform_int(rng, 0, T);
  int b = uniform_int(rng, a, T);
  switch (uniform_int(rng, 0, 5)) {
    case 0:
      return StlExpr::negate(random_spec(rng, depth - 1, T));
    case 1: {
      std::vector<StlPtr> kids;
      int k = uniform_int(rng, 2, 3);
      for (int i = 0; i < k; ++i) kids.push_back(random_spec(rng, depth - 1, T));
      return StlExpr::conj(std::move(kids));
    }
    case 2: {
      std::vector<StlPtr> kids;
      int k = uniform_int(rng, 2, 3);
      for (int i = 0; i < k; ++i) kids.push_back(random_spec(rng, depth - 1, T));
      return StlExpr::disj(std::move(kids));
    }
    case 3:
      return StlExpr::eventually(a, b, random_spec(rng, depth - 1, T));
    case 4:
      return StlExpr::always(a, b, random_spec(rng, depth - 1, T));
    default:
      return StlExpr::until(a, b, random_spec(rng, depth - 1, T),
                            random_spec(rng, depth - 1, T));
  }
}

inline Trajectory random_traj(Rng &rng, int T, int n = 2, double span = 3.0) {
  Trajectory s;
  s.dt = 0.5;
  s.states = Mat(T + 1, n);
  s.controls = Mat(T, n);
  for (auto &v : s.states.v) v = uniform(rng, -span, span);
  for (auto &v : s.controls.v) v = uniform(rng, -1.0, 1.0);
  return s;
}

inline double rel_err(double got, double want) {
  double denom = std::max({std::fabs(got), std::fabs(want), 1e-8});
  return std::fabs(got - want) / denom;
}

}  // namespace testutil
