#pragma once

#include <stdexcept>
#include <string>

#include "stlflow/stl/ast.hpp"

namespace stlflow {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string &msg, size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Grammar (tightest binding first):
//   atom  := 'T' | circle(cx,cy,r) | box(cx,cy,h) | '(' expr ')'
//   unary := '~' unary | 'F[a,b]' unary | 'G[a,b]' unary | atom
//   until := unary ('U[a,b]' unary)*
//   and   := until ('&' until)*       (n-ary flattened)
//   expr  := and ('|' and)*           (n-ary flattened)
// '~' applied directly to a predicate folds into its polarity.
StlPtr parse(const std::string &text);

}  // namespace stlflow
