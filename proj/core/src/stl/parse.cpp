#include "stlflow/stl/parse.hpp"

#include <cctype>
#include <cstdlib>

namespace stlflow {

namespace {

class Parser {
 public:
  explicit Parser(const std::string &text) : text_(text) {}

  StlPtr run() {
    StlPtr e = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string &text_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c, const char *what) {
    if (!accept(c)) fail(std::string("expected '") + c + "' (" + what + ")");
  }

  bool keyword(const char *kw) {
    skip_ws();
    size_t len = 0;
    while (kw[len]) ++len;
    if (text_.compare(pos_, len, kw) != 0) return false;
    // keywords must not run into an identifier character
    size_t end = pos_ + len;
    if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end])) &&
        std::isalpha(static_cast<unsigned char>(kw[len - 1])))
      return false;
    pos_ = end;
    return true;
  }

  double number() {
    skip_ws();
    const char *start = text_.c_str() + pos_;
    char *end = nullptr;
    double val = std::strtod(start, &end);
    if (end == start) fail("expected a number");
    pos_ += static_cast<size_t>(end - start);
    return val;
  }

  int nonneg_int() {
    skip_ws();
    size_t begin = pos_;
    double val = number();
    int iv = static_cast<int>(val);
    if (val < 0 || static_cast<double>(iv) != val) {
      pos_ = begin;
      fail("expected a nonnegative integer");
    }
    return iv;
  }

  std::pair<int, int> interval() {
    expect('[', "interval");
    int a = nonneg_int();
    expect(',', "interval");
    size_t b_at = pos_;
    int b = nonneg_int();
    expect(']', "interval");
    if (a > b) throw ParseError("interval lower bound exceeds upper bound", b_at);
    return {a, b};
  }

  StlPtr parse_or() {
    std::vector<StlPtr> terms{parse_and()};
    while (accept('|')) terms.push_back(parse_and());
    if (terms.size() == 1) return terms[0];
    return StlExpr::disj(std::move(terms));
  }

  StlPtr parse_and() {
    std::vector<StlPtr> terms{parse_until()};
    while (accept('&')) terms.push_back(parse_until());
    if (terms.size() == 1) return terms[0];
    return StlExpr::conj(std::move(terms));
  }

  StlPtr parse_until() {
    StlPtr left = parse_unary();
    while (true) {
      skip_ws();
      size_t save = pos_;
      if (!keyword("U")) break;
      if (!peek('[')) {
        pos_ = save;
        break;
      }
      auto [a, b] = interval();
      StlPtr right = parse_unary();
      left = StlExpr::until(a, b, left, right);
    }
    return left;
  }

  StlPtr parse_unary() {
    skip_ws();
    if (accept('~')) {
      StlPtr child = parse_unary();
      if (child->kind == Kind::Ap) {
        Predicate p = child->pred;
        p.polarity = p.polarity == Polarity::Reach ? Polarity::Avoid : Polarity::Reach;
        return StlExpr::ap(p);
      }
      return StlExpr::negate(std::move(child));
    }
    if (keyword("F")) {
      auto [a, b] = interval();
      return StlExpr::eventually(a, b, parse_unary());
    }
    if (keyword("G")) {
      auto [a, b] = interval();
      return StlExpr::always(a, b, parse_unary());
    }
    if (accept('(')) {
      StlPtr e = parse_or();
      expect(')', "group");
      return e;
    }
    if (keyword("T")) return StlExpr::top();
    if (keyword("circle")) return predicate(Shape::Circle);
    if (keyword("box")) return predicate(Shape::Box);
    fail("expected a formula");
  }

  StlPtr predicate(Shape shape) {
    expect('(', "predicate");
    Predicate p;
    p.shape = shape;
    p.center[0] = number();
    expect(',', "predicate");
    p.center[1] = number();
    expect(',', "predicate");
    size_t ext_at = pos_;
    p.extent = number();
    if (!(p.extent > 0)) throw ParseError("predicate extent must be positive", ext_at);
    expect(')', "predicate");
    return StlExpr::ap(p);
  }
};

}  // namespace

StlPtr parse(const std::string &text) { return Parser(text).run(); }

}  // namespace stlflow
