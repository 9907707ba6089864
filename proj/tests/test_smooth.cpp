#include <doctest.h>

#include "helpers.hpp"
#include "stlflow/stl/parse.hpp"
#include "stlflow/stl/smooth.hpp"

using namespace stlflow;
using namespace testutil;

namespace {

// conservative soft-hard bound: reductions compound along tree paths, so the
// sum over all reduction nodes of ln(arity)/beta bounds the total error
double soft_hard_bound(const StlPtr &phi, int t, int T, double beta) {
  double here = 0.0;
  int lo = std::min(t + std::max(phi->a, 0), T);
  int hi = std::min(t + std::max(phi->b, 0), T);
  int window = hi - lo + 1;
  switch (phi->kind) {
    case Kind::And:
    case Kind::Or:
      here = std::log(double(phi->children.size())) / beta;
      break;
    case Kind::Eventually:
    case Kind::Always:
      here = std::log(double(window)) / beta;
      break;
    case Kind::Until:
      // outer softmax over the window plus an inner softmin of <= T+1 terms
      here = (std::log(double(window)) + std::log(double(T + 2))) / beta;
      break;
    default:
      break;
  }
  double kids = 0.0;
  for (const auto &c : phi->children) kids += soft_hard_bound(c, 0, T, beta);
  return here + kids;
}

double fd_grad(const Trajectory &s, int t, const StlPtr &phi, const SmoothConfig &cfg,
               int row, int col, double h = 1e-5) {
  Trajectory sp = s, sm = s;
  sp.states(row, col) += h;
  sm.states(row, col) -= h;
  return (smooth_robustness(sp, t, phi, cfg).value -
          smooth_robustness(sm, t, phi, cfg).value) /
         (2 * h);
}

}  // namespace

TEST_CASE("predicate-only spec: smooth equals hard with analytic gradient") {
  Rng rng(2);
  SmoothConfig cfg;
  for (int i = 0; i < 20; ++i) {
    Predicate p = random_predicate(rng);
    StlPtr phi = StlExpr::ap(p);
    Trajectory s = random_traj(rng, 4);
    auto res = smooth_robustness(s, 1, phi, cfg);
    CHECK(res.value == robustness(s, 1, phi));
    double g[2];
    p.mu_grad(s.states.row(1), g);
    CHECK(res.state_grad(1, 0) == doctest::Approx(g[0]));
    CHECK(res.state_grad(1, 1) == doctest::Approx(g[1]));
    CHECK(res.state_grad(0, 0) == 0.0);
  }
}

TEST_CASE("two-element softmin closed form") {
  // robustness values 1.0 and 2.0: G[0,0] of two Aps at distance extent-diff
  Trajectory s;
  s.dt = 0.5;
  s.states = Mat(1, 2);
  s.controls = Mat(0, 2);
  Predicate a;  // mu = extent - |x| = 1 at origin
  a.extent = 1.0;
  Predicate b;
  b.extent = 2.0;
  StlPtr phi = StlExpr::conj({StlExpr::ap(a), StlExpr::ap(b)});

  SmoothConfig cfg;
  cfg.beta = 10.0;
  double soft = smooth_robustness(s, 0, phi, cfg).value;
  double expect = -std::log(std::exp(-10.0 * 1.0) + std::exp(-10.0 * 2.0)) / 10.0;
  CHECK(soft == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::fabs(soft - 1.0) <= std::log(2.0) / 10.0);
}

TEST_CASE("hard mode reproduces exact robustness") {
  Rng rng(13);
  SmoothConfig cfg;
  cfg.mode = SmoothMode::Hard;
  for (int i = 0; i < 100; ++i) {
    int T = uniform_int(rng, 1, 10);
    Trajectory s = random_traj(rng, T);
    StlPtr phi = random_spec(rng, uniform_int(rng, 0, 3), T);
    CHECK(smooth_robustness(s, 0, phi, cfg).value == robustness(s, 0, phi));
  }
}

TEST_CASE("soft-hard bound holds empirically") {
  Rng rng(17);
  for (double beta : {2.0, 10.0, 50.0}) {
    SmoothConfig cfg;
    cfg.beta = beta;
    for (int i = 0; i < 50; ++i) {
      int T = uniform_int(rng, 1, 10);
      Trajectory s = random_traj(rng, T);
      StlPtr phi = random_spec(rng, uniform_int(rng, 0, 3), T);
      double soft = smooth_robustness(s, 0, phi, cfg).value;
      double hard = robustness(s, 0, phi);
      CHECK(std::fabs(soft - hard) <= soft_hard_bound(phi, 0, T, beta) + 1e-12);
    }
  }
}

TEST_CASE("beta -> infinity converges to hard robustness") {
  Rng rng(19);
  Trajectory s = random_traj(rng, 8);
  StlPtr phi = random_spec(rng, 3, 8);
  double hard = robustness(s, 0, phi);
  double prev = std::fabs(smooth_robustness(s, 0, phi, {1.0, SmoothMode::Soft}).value - hard);
  for (double beta : {10.0, 100.0, 1000.0}) {
    double err =
        std::fabs(smooth_robustness(s, 0, phi, {beta, SmoothMode::Soft}).value - hard);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("smooth gradient matches central finite differences") {
  Rng rng(23);
  SmoothConfig cfg;
  int cases = 0;
  while (cases < 60) {
    int T = uniform_int(rng, 2, 8);
    Trajectory s = random_traj(rng, T);
    StlPtr phi = random_spec(rng, uniform_int(rng, 1, 3), T);
    auto res = smooth_robustness(s, 0, phi, cfg);
    // probe a handful of random entries per case
    bool bad_case = false;
    for (int probe = 0; probe < 4 && !bad_case; ++probe) {
      int row = uniform_int(rng, 0, T);
      int col = uniform_int(rng, 0, 1);
      double fd = fd_grad(s, 0, phi, cfg, row, col);
      if (std::fabs(fd) < 1e-7 && std::fabs(res.state_grad(row, col)) < 1e-7) continue;
      CHECK(rel_err(res.state_grad(row, col), fd) <= 1e-4);
    }
    ++cases;
  }
}

TEST_CASE("the single-goal spec gradient on an 8-step signal") {
  Rng rng(29);
  StlPtr phi = parse("F[0,6] circle(2,0,1) & G[0,8] ~circle(0,3,1)");
  SmoothConfig cfg;
  for (int rep = 0; rep < 10; ++rep) {
    Trajectory s = random_traj(rng, 8);
    auto res = smooth_robustness(s, 0, phi, cfg);
    for (int row = 0; row <= 8; ++row)
      for (int col = 0; col < 2; ++col) {
        double fd = fd_grad(s, 0, phi, cfg, row, col);
        if (std::fabs(fd) < 1e-7 && std::fabs(res.state_grad(row, col)) < 1e-7) continue;
        CHECK(rel_err(res.state_grad(row, col), fd) <= 1e-4);
      }
  }
}
