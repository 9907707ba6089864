#include "stlflow/stl/ast.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stlflow {

double Predicate::dist(const double *state) const {
  double dx = state[0] - center[0];
  double dy = state[1] - center[1];
  double dz = -center[2];
  if (shape == Shape::Circle) return std::sqrt(dx * dx + dy * dy + dz * dz);
  return std::max({std::abs(dx), std::abs(dy), std::abs(dz)});
}

double Predicate::mu(const double *state) const {
  double d = dist(state);
  return polarity == Polarity::Reach ? extent - d : d - extent;
}

void Predicate::mu_grad(const double *state, double *out) const {
  double dx = state[0] - center[0];
  double dy = state[1] - center[1];
  double dz = -center[2];
  double gx = 0.0, gy = 0.0;
  if (shape == Shape::Circle) {
    double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (d > 0.0) {
      gx = dx / d;
      gy = dy / d;
    }
  } else {
    double ax = std::abs(dx), ay = std::abs(dy), az = std::abs(dz);
    if (ax >= ay && ax >= az) {
      gx = dx >= 0 ? 1.0 : -1.0;
    } else if (ay >= az) {
      gy = dy >= 0 ? 1.0 : -1.0;
    }
    // argmax on the z slack has no x/y gradient
  }
  double sign = polarity == Polarity::Reach ? -1.0 : 1.0;
  out[0] = sign * gx;
  out[1] = sign * gy;
}

namespace {

std::shared_ptr<StlExpr> make(Kind k) { return std::make_shared<StlExpr>(k); }

void check_interval(int a, int b) {
  if (a < 0 || b < 0 || a > b)
    throw std::invalid_argument("invalid interval [" + std::to_string(a) + "," +
                                std::to_string(b) + "]");
}

}  // namespace

StlPtr StlExpr::top() { return make(Kind::Top); }

StlPtr StlExpr::ap(Predicate p) {
  if (!(p.extent > 0)) throw std::invalid_argument("predicate extent must be > 0");
  auto n = make(Kind::Ap);
  n->pred = p;
  return n;
}

StlPtr StlExpr::negate(StlPtr child) {
  // negation folds onto predicates; Not nodes only ever wrap compounds
  if (child->kind == Kind::Ap) {
    Predicate p = child->pred;
    p.polarity = p.polarity == Polarity::Reach ? Polarity::Avoid : Polarity::Reach;
    return ap(p);
  }
  auto n = make(Kind::Not);
  n->children.push_back(std::move(child));
  return n;
}

StlPtr StlExpr::conj(std::vector<StlPtr> children) {
  if (children.size() < 2) throw std::invalid_argument("And needs >= 2 children");
  auto n = make(Kind::And);
  n->children = std::move(children);
  return n;
}

StlPtr StlExpr::disj(std::vector<StlPtr> children) {
  if (children.size() < 2) throw std::invalid_argument("Or needs >= 2 children");
  auto n = make(Kind::Or);
  n->children = std::move(children);
  return n;
}

StlPtr StlExpr::eventually(int a, int b, StlPtr child) {
  check_interval(a, b);
  auto n = make(Kind::Eventually);
  n->a = a;
  n->b = b;
  n->children.push_back(std::move(child));
  return n;
}

StlPtr StlExpr::always(int a, int b, StlPtr child) {
  check_interval(a, b);
  auto n = make(Kind::Always);
  n->a = a;
  n->b = b;
  n->children.push_back(std::move(child));
  return n;
}

StlPtr StlExpr::until(int a, int b, StlPtr left, StlPtr right) {
  check_interval(a, b);
  auto n = make(Kind::Until);
  n->a = a;
  n->b = b;
  n->children.push_back(std::move(left));
  n->children.push_back(std::move(right));
  return n;
}

int StlExpr::size() const {
  int total = 1;
  for (const auto &c : children) total += c->size();
  return total;
}

bool spec_equal(const StlPtr &lhs, const StlPtr &rhs) {
  if (lhs.get() == rhs.get()) return true;
  if (!lhs || !rhs) return false;
  if (lhs->kind != rhs->kind || lhs->a != rhs->a || lhs->b != rhs->b) return false;
  if (lhs->kind == Kind::Ap && !(lhs->pred == rhs->pred)) return false;
  if (lhs->children.size() != rhs->children.size()) return false;
  for (size_t i = 0; i < lhs->children.size(); ++i)
    if (!spec_equal(lhs->children[i], rhs->children[i])) return false;
  return true;
}

namespace {

std::string fmt_num(double x) {
  char buf[32];
  int len = std::snprintf(buf, sizeof(buf), "%.17g", x);
  // shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char tmp[32];
    std::snprintf(tmp, sizeof(tmp), "%.*g", prec, x);
    double back;
    std::sscanf(tmp, "%lf", &back);
    if (back == x) return tmp;
  }
  return std::string(buf, len);
}

int precedence(Kind k) {
  switch (k) {
    case Kind::Or: return 0;
    case Kind::And: return 1;
    case Kind::Until: return 2;
    default: return 3;  // unary / atoms
  }
}

void unparse_rec(const StlPtr &e, int parent_prec, std::string &out) {
  int prec = precedence(e->kind);
  bool paren = prec < parent_prec;
  if (paren) out += "(";
  switch (e->kind) {
    case Kind::Top:
      out += "T";
      break;
    case Kind::Ap: {
      const Predicate &p = e->pred;
      if (p.polarity == Polarity::Avoid) out += "~";
      out += p.shape == Shape::Circle ? "circle(" : "box(";
      out += fmt_num(p.center[0]) + "," + fmt_num(p.center[1]) + "," +
             fmt_num(p.extent) + ")";
      break;
    }
    case Kind::Not:
      out += "~ ";
      unparse_rec(e->children[0], 3, out);
      break;
    case Kind::And:
      for (size_t i = 0; i < e->children.size(); ++i) {
        if (i) out += " & ";
        unparse_rec(e->children[i], 2, out);
      }
      break;
    case Kind::Or:
      for (size_t i = 0; i < e->children.size(); ++i) {
        if (i) out += " | ";
        unparse_rec(e->children[i], 1, out);
      }
      break;
    case Kind::Eventually:
    case Kind::Always:
      out += e->kind == Kind::Eventually ? "F[" : "G[";
      out += std::to_string(e->a) + "," + std::to_string(e->b) + "] ";
      unparse_rec(e->children[0], 3, out);
      break;
    case Kind::Until:
      unparse_rec(e->children[0], 3, out);
      out += " U[" + std::to_string(e->a) + "," + std::to_string(e->b) + "] ";
      unparse_rec(e->children[1], 3, out);
      break;
  }
  if (paren) out += ")";
}

}  // namespace

std::string unparse(const StlPtr &spec) {
  std::string out;
  unparse_rec(spec, 0, out);
  return out;
}

}  // namespace stlflow
