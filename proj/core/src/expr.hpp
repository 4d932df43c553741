#pragma once

#include <string>
#include <vector>

#include "qpfb/scalar.hpp"

namespace qpfb::detail {

/// Expression tree of the presentation-file term language.
struct Node {
  enum Kind { Num, Ident, Add, Sub, Neg, Mul, Div, Pow, Tensor, D };
  Kind kind = Num;
  Rational num;
  std::string name;
  int exponent = 0;
  int column = 0;
  std::vector<Node> kids;
};

enum class ExprMode { Plain, Tensor, Form };

/// Parses `text`; columns are reported relative to `column0`. Throws
/// ExprError with the offending column.
Node parse_expression(const std::string& text, int column0, ExprMode mode);

struct ExprError {
  int column;
  std::string message;
};

}  // namespace qpfb::detail
