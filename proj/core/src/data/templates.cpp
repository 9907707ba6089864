#include "stlflow/data/templates.hpp"

#include <algorithm>
#include <numeric>

namespace stlflow {

const char *template_name(TemplateId id) {
  switch (id) {
    case TemplateId::Single: return "single";
    case TemplateId::Multi: return "multi";
    case TemplateId::Sequential: return "sequential";
    case TemplateId::Partial: return "partial";
  }
  return "?";
}

TemplateId template_from_name(const std::string &name) {
  if (name == "single") return TemplateId::Single;
  if (name == "multi") return TemplateId::Multi;
  if (name == "sequential") return TemplateId::Sequential;
  if (name == "partial") return TemplateId::Partial;
  throw std::invalid_argument("unknown template: " + name);
}

namespace {

struct Window {
  int a, b;
};

// 0 <= a <= b <= hi with width >= min_width (shrunk when hi is small).
Window sample_window(Rng &rng, int hi, int min_width) {
  min_width = std::min(min_width, hi);
  int a = uniform_int(rng, 0, hi - min_width);
  int b = uniform_int(rng, a + min_width, hi);
  return {a, b};
}

StlPtr reach_goal(const Predicate &goal, Rng &rng, int budget, int min_width,
                  bool allow_dwell, double dwell_prob, StlPtr inner_extra) {
  // reserve room for a short dwell window when requested
  bool dwell = allow_dwell && uniform(rng) < dwell_prob && budget > 2 * min_width;
  int dwell_len = 0;
  Window dw{0, 0};
  if (dwell) {
    dw.a = 0;
    dw.b = uniform_int(rng, 1, std::max(1, min_width / 2));
    dwell_len = dw.b;
  }
  Window w = sample_window(rng, budget - dwell_len, min_width);
  StlPtr body = StlExpr::ap(goal);
  if (inner_extra)
    body = StlExpr::conj({body, std::move(inner_extra)});
  if (dwell) body = StlExpr::always(dw.a, dw.b, std::move(body));
  return StlExpr::eventually(w.a, w.b, std::move(body));
}

std::vector<StlPtr> avoid_terms(const SceneSpec &scene, int T) {
  std::vector<StlPtr> terms;
  for (const auto &obs : scene.obstacles)
    terms.push_back(StlExpr::always(0, T, StlExpr::ap(obs)));
  return terms;
}

StlPtr conjoin(std::vector<StlPtr> terms) {
  if (terms.empty()) return StlExpr::top();
  if (terms.size() == 1) return terms[0];
  return StlExpr::conj(std::move(terms));
}

Predicate as_avoid(const Predicate &goal) {
  Predicate p = goal;
  p.polarity = Polarity::Avoid;
  return p;
}

}  // namespace

StlPtr sample_spec(TemplateId id, const SceneSpec &scene, Rng &rng, int T,
                   const TemplateConfig &cfg) {
  const int min_width = std::max(1, T / cfg.min_width_div);
  const auto &goals = scene.goals;

  switch (id) {
    case TemplateId::Single: {
      if (goals.empty()) throw InsufficientGoals("Single template needs >= 1 goal");
      std::vector<StlPtr> terms{
          reach_goal(goals[0], rng, T, min_width, true, cfg.dwell_prob, nullptr)};
      auto avoid = avoid_terms(scene, T);
      terms.insert(terms.end(), avoid.begin(), avoid.end());
      return conjoin(std::move(terms));
    }

    case TemplateId::Multi: {
      if (goals.empty()) throw InsufficientGoals("Multi template needs >= 1 goal");
      if (goals.size() == 1) {
        std::vector<StlPtr> terms{
            reach_goal(goals[0], rng, T, min_width, false, 0, nullptr)};
        auto avoid = avoid_terms(scene, T);
        terms.insert(terms.end(), avoid.begin(), avoid.end());
        return conjoin(std::move(terms));
      }
      std::vector<StlPtr> reaches;
      for (const auto &g : goals)
        reaches.push_back(reach_goal(g, rng, T, min_width, false, 0, nullptr));
      if (uniform(rng) < 0.5) {
        // and-of-reaches paired with avoid
        auto avoid = avoid_terms(scene, T);
        reaches.insert(reaches.end(), avoid.begin(), avoid.end());
        return conjoin(std::move(reaches));
      }
      // or form; optionally group the last two reaches into an And (depth 2)
      if (reaches.size() >= 3 && uniform(rng) < 0.5) {
        StlPtr tail = StlExpr::conj({reaches[reaches.size() - 2], reaches.back()});
        reaches.resize(reaches.size() - 2);
        reaches.push_back(std::move(tail));
      }
      return StlExpr::disj(std::move(reaches));
    }

    case TemplateId::Sequential: {
      if (goals.empty())
        throw InsufficientGoals("Sequential template needs >= 1 goal");
      const int k = static_cast<int>(goals.size());
      const int budget = T / k;
      const int mw = std::min(min_width, std::max(1, budget / 2));
      StlPtr chain = nullptr;
      for (int i = k - 1; i >= 0; --i) {
        bool innermost = chain == nullptr;
        chain = reach_goal(goals[i], rng, budget, mw, innermost, cfg.dwell_prob,
                           std::move(chain));
      }
      std::vector<StlPtr> terms{std::move(chain)};
      auto avoid = avoid_terms(scene, T);
      terms.insert(terms.end(), avoid.begin(), avoid.end());
      return conjoin(std::move(terms));
    }

    case TemplateId::Partial: {
      if (goals.size() < 2)
        throw InsufficientGoals("Partial template needs >= 2 goals");
      const int k = static_cast<int>(goals.size());
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = k - 1; i > 0; --i) std::swap(perm[i], perm[uniform_int(rng, 0, i)]);
      int n1 = uniform_int(rng, 1, k - 1);
      std::vector<StlPtr> terms;
      // ordering constraints along an acyclic chain: do not touch the later
      // goal until the earlier one has been reached
      for (int i = 0; i < n1; ++i) {
        const Predicate &earlier = goals[perm[i]];
        const Predicate &later = goals[perm[i + 1]];
        terms.push_back(StlExpr::until(0, T, StlExpr::ap(as_avoid(later)),
                                       StlExpr::ap(earlier)));
      }
      // timed reaches so every chained goal is actually visited
      terms.push_back(StlExpr::eventually(0, T, StlExpr::ap(goals[perm[0]])));
      for (int i = 1; i <= n1; ++i) {
        int ta = uniform_int(rng, 0, T / 2);
        terms.push_back(StlExpr::eventually(ta, T, StlExpr::ap(goals[perm[i]])));
      }
      auto avoid = avoid_terms(scene, T);
      terms.insert(terms.end(), avoid.begin(), avoid.end());
      return conjoin(std::move(terms));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace stlflow
