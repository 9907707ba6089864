#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace stlflow {

enum class Shape { Circle, Box };
enum class Polarity { Reach, Avoid };

// Atomic proposition mu(x) >= 0 over the planar position (x, y).
// Reach:  mu = extent - dist(pos, center)
// Avoid:  mu = dist(pos, center) - extent
// dist is Euclidean for Circle and the infinity norm for Box; the state is
// lifted to (x, y, 0) so planar environments use center z = 0.
struct Predicate {
  Shape shape = Shape::Circle;
  std::array<double, 3> center{0, 0, 0};
  double extent = 1.0;  // radius for Circle, half side length for Box
  Polarity polarity = Polarity::Reach;

  double dist(const double *state) const;
  double mu(const double *state) const;
  // d mu / d (x, y); writes two entries.
  void mu_grad(const double *state, double *out) const;

  bool operator==(const Predicate &o) const = default;
};

enum class Kind { Top, Ap, Not, And, Or, Eventually, Always, Until };

class StlExpr;
using StlPtr = std::shared_ptr<const StlExpr>;

// Immutable STL syntax tree node. And/Or are n-ary with >= 2 children;
// Eventually/Always/Until carry an inclusive integer step interval [a, b].
class StlExpr {
 public:
  Kind kind;
  int a = -1;
  int b = -1;
  Predicate pred{};  // valid only when kind == Ap
  std::vector<StlPtr> children;

  static StlPtr top();
  static StlPtr ap(Predicate p);
  static StlPtr negate(StlPtr child);
  static StlPtr conj(std::vector<StlPtr> children);
  static StlPtr disj(std::vector<StlPtr> children);
  static StlPtr eventually(int a, int b, StlPtr child);
  static StlPtr always(int a, int b, StlPtr child);
  static StlPtr until(int a, int b, StlPtr left, StlPtr right);

  // Number of nodes in the tree (shared subtrees counted per occurrence).
  int size() const;

  StlExpr(Kind k) : kind(k) {}
};

bool spec_equal(const StlPtr &lhs, const StlPtr &rhs);

// Surface-syntax text form; parse(unparse(phi)) reproduces phi.
std::string unparse(const StlPtr &spec);

}  // namespace stlflow
